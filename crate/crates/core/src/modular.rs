//! Word-size prime field arithmetic, CRT and rational reconstruction, and the
//! modular evaluation/interpolation resultants that back the heavy eliminations.

use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_core::IntPoly;

static PRIMES: Mutex<Vec<u64>> = Mutex::new(Vec::new());

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The `k`-th prime below 2^62, descending; cached.
pub fn prime(k: usize) -> u64 {
    let mut ps = PRIMES.lock().unwrap();
    let mut cand = ps.last().copied().unwrap_or(1u64 << 62);
    while ps.len() <= k {
        cand -= 1;
        while !is_prime(cand) {
            cand -= 1;
        }
        ps.push(cand);
    }
    ps[k]
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse by Fermat; `a` must be nonzero mod `p`.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

pub fn big_mod(a: &BigInt, p: u64) -> u64 {
    let r = a.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub fn log2_big(a: &BigInt) -> f64 {
    let b = a.bits();
    if b == 0 {
        return f64::NEG_INFINITY;
    }
    if b <= 64 {
        return a.abs().to_f64().unwrap().log2();
    }
    let top = (a.abs() >> (b - 53) as usize).to_f64().unwrap();
    top.log2() + (b - 53) as f64
}

// ---------- dense polynomials over F_p, ascending, trimmed ----------

pub fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn reduce(a: &IntPoly, p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.coeffs().iter().map(|c| big_mod(c, p)).collect();
    trim(&mut v);
    v
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = addmod(mulmod(acc, x, p), c, p);
    }
    acc
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> = (0..n)
        .map(|k| addmod(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0), p))
        .collect();
    trim(&mut v);
    v
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> = (0..n)
        .map(|k| submod(*a.get(k).unwrap_or(&0), *b.get(k).unwrap_or(&0), p))
        .collect();
    trim(&mut v);
    v
}

pub fn scale(a: &[u64], s: u64, p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().map(|&c| mulmod(c, s, p)).collect();
    trim(&mut v);
    v
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    // accumulate in u128 and reduce lazily
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let p128 = p as u128;
    let limit = u128::MAX - p128 * p128;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let t = &mut acc[i + j];
            *t += x as u128 * y as u128;
            if *t >= limit {
                *t %= p128;
            }
        }
    }
    let mut v: Vec<u64> = acc.into_iter().map(|t| (t % p128) as u64).collect();
    trim(&mut v);
    v
}

/// Remainder of `a` by nonzero `b`.
pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divrem(a, b, p).1
}

pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!b.is_empty());
    if a.len() < b.len() {
        return (vec![], a.to_vec());
    }
    let db = b.len() - 1;
    let inv = invmod(*b.last().unwrap(), p);
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for k in (0..q.len()).rev() {
        let t = mulmod(r[k + db], inv, p);
        q[k] = t;
        if t != 0 {
            for (j, &c) in b.iter().enumerate() {
                r[k + j] = submod(r[k + j], mulmod(t, c, p), p);
            }
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => vec![],
        Some(&l) => scale(a, invmod(l, p), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

pub fn derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| mulmod(c, k as u64 % p, p))
        .collect();
    trim(&mut v);
    v
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
    let (mut r0, mut r1) = (m.to_vec(), rem(a, m, p));
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    if r0.len() != 1 {
        return None;
    }
    let inv = invmod(r0[0], p);
    Some(rem(&scale(&t0, inv, p), m, p))
}

/// `x^e mod m`.
pub fn pow_x_mod(e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut result = rem(&[1], m, p);
    let mut base = rem(&[0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &base, p), m, p);
        }
        base = rem(&mul(&base, &base, p), m, p);
        e >>= 1;
    }
    result
}

/// Resultant of two nonzero polynomials at their actual degrees.
fn res_actual(f: &[u64], g: &[u64], p: u64) -> u64 {
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    let mut acc = 1u64;
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            return mulmod(acc, powmod(b[0], da as u64, p), p);
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let dr = r.len() - 1;
        if (da * db) % 2 == 1 {
            acc = submod(0, acc, p);
        }
        acc = mulmod(acc, powmod(*b.last().unwrap(), (da - dr) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Sylvester resultant with formal degrees `df >= deg f`, `dg >= deg g`.
pub fn resultant(f: &[u64], df: usize, g: &[u64], dg: usize, p: u64) -> u64 {
    if df == 0 {
        return powmod(*f.first().unwrap_or(&0), dg as u64, p);
    }
    if dg == 0 {
        return powmod(*g.first().unwrap_or(&0), df as u64, p);
    }
    if f.is_empty() || g.is_empty() {
        return 0;
    }
    let (af, ag) = (f.len() - 1, g.len() - 1);
    if af == df {
        let l = powmod(*f.last().unwrap(), (dg - ag) as u64, p);
        mulmod(l, res_actual(f, g, p), p)
    } else if ag == dg {
        let mut v = mulmod(powmod(*g.last().unwrap(), (df - af) as u64, p), res_actual(g, f, p), p);
        if (df * dg) % 2 == 1 {
            v = submod(0, v, p);
        }
        v
    } else {
        0
    }
}

/// Newton interpolation through `(xs[k], ys[k])`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = submod(dd[i], dd[i - 1], p);
            let den = submod(xs[i], xs[i - j], p);
            dd[i] = mulmod(num, invmod(den, p), p);
        }
    }
    let mut poly: Vec<u64> = vec![];
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] = addmod(next[k + 1], c, p);
            next[k] = submod(next[k], mulmod(c, xs[i], p), p);
        }
        next[0] = addmod(next[0], dd[i], p);
        poly = next;
    }
    trim(&mut poly);
    poly
}

/// Determinant of a square matrix over F_p.
pub fn det(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut d = 1u64;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            d = submod(0, d, p);
        }
        d = mulmod(d, m[c][c], p);
        let inv = invmod(m[c][c], p);
        for r in c + 1..n {
            if m[r][c] == 0 {
                continue;
            }
            let f = mulmod(m[r][c], inv, p);
            for k in c..n {
                let t = mulmod(f, m[c][k], p);
                m[r][k] = submod(m[r][k], t, p);
            }
        }
    }
    d
}

// ---------- CRT and rational reconstruction ----------

/// Incremental Chinese remaindering of an integer vector.
#[derive(Clone, Debug)]
pub struct Crt {
    pub modulus: BigInt,
    pub residues: Vec<BigInt>,
}

impl Crt {
    pub fn new(len: usize) -> Self {
        Self {
            modulus: BigInt::one(),
            residues: vec![BigInt::zero(); len],
        }
    }

    pub fn bits(&self) -> f64 {
        log2_big(&self.modulus)
    }

    pub fn add(&mut self, image: &[u64], p: u64) {
        assert_eq!(image.len(), self.residues.len());
        let minv = invmod(big_mod(&self.modulus, p), p);
        for (r, &a) in self.residues.iter_mut().zip(image) {
            let rp = big_mod(r, p);
            let t = mulmod(submod(a, rp, p), minv, p);
            if t != 0 {
                *r += &self.modulus * BigInt::from(t);
            }
        }
        self.modulus *= BigInt::from(p);
    }

    /// Residues in the symmetric range (-M/2, M/2].
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1usize;
        self.residues
            .iter()
            .map(|r| if r > &half { r - &self.modulus } else { r.clone() })
            .collect()
    }
}

/// Rational `n/d` with `|n|, d <= sqrt(M/2)` and `n ≡ a·d (mod M)`.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let (n, d) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    if n.gcd(&d) != BigInt::one() {
        return None;
    }
    Some((n, d))
}

// ---------- dense multivariate integer polynomials for elimination ----------

/// `c[i][j][k]` is the coefficient of `x^i y^j z^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Dense3 {
    pub c: Vec<Vec<Vec<BigInt>>>,
}

impl Dense3 {
    pub fn deg_x(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.c.iter().map(|r| r.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn deg_z(&self) -> usize {
        self.c
            .iter()
            .flat_map(|r| r.iter().map(|s| s.len()))
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|r| r.iter().all(|s| s.iter().all(|a| a.is_zero())))
    }

    /// Sum of absolute values of the coefficients of `x^i`.
    fn norm1_x(&self, i: usize) -> BigInt {
        self.c[i].iter().flat_map(|s| s.iter()).map(|a| a.abs()).sum()
    }

    /// log2 of the Euclidean norm of the vector of `x`-coefficient 1-norms.
    fn row_norm_log2(&self) -> f64 {
        let logs: Vec<f64> = (0..self.c.len()).map(|i| log2_big(&self.norm1_x(i))).collect();
        let mx = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if mx == f64::NEG_INFINITY {
            return mx;
        }
        let s: f64 = logs.iter().map(|l| (2f64).powf(2.0 * (l - mx))).sum();
        mx + 0.5 * s.log2()
    }

    /// Reduction mod `p`, caching residues so repeated evaluations are cheap.
    pub fn reduce(&self, p: u64) -> Dense3Mod {
        Dense3Mod {
            p,
            c: self
                .c
                .iter()
                .map(|r| r.iter().map(|s| s.iter().map(|a| big_mod(a, p)).collect()).collect())
                .collect(),
        }
    }
}

pub struct Dense3Mod {
    p: u64,
    c: Vec<Vec<Vec<u64>>>,
}

impl Dense3Mod {
    pub fn eval_yz(&self, y0: u64, z0: u64) -> Vec<u64> {
        let p = self.p;
        let mut v: Vec<u64> = self
            .c
            .iter()
            .map(|r| {
                let mut acc = 0u64;
                for s in r.iter().rev() {
                    let inner = eval(s, z0, p);
                    acc = addmod(mulmod(acc, y0, p), inner, p);
                }
                acc
            })
            .collect();
        trim(&mut v);
        v
    }
}

/// `c[j][k]` is the coefficient of `y^j z^k`.
pub type Dense2 = Vec<Vec<BigInt>>;

fn primes_for_bits(bits: f64) -> usize {
    ((bits + 2.0) / 61.0).ceil().max(1.0) as usize
}

/// Images of `Res_x(f, g)` over a grid of `(y, z)` points mod `p`, interpolated.
fn resultant3_image(f: &Dense3, g: &Dense3, ny: usize, nz: usize, p: u64) -> Vec<Vec<u64>> {
    let (dfx, dgx) = (f.deg_x(), g.deg_x());
    let (fm, gm) = (f.reduce(p), g.reduce(p));
    let ys: Vec<u64> = (0..=ny as u64).collect();
    let zs: Vec<u64> = (0..=nz as u64).collect();
    // per y: interpolate over z, giving a polynomial in z
    let per_y: Vec<Vec<u64>> = ys
        .iter()
        .map(|&y0| {
            let vals: Vec<u64> = zs
                .iter()
                .map(|&z0| {
                    let a = fm.eval_yz(y0, z0);
                    let b = gm.eval_yz(y0, z0);
                    resultant(&a, dfx, &b, dgx, p)
                })
                .collect();
            interpolate(&zs, &vals, p)
        })
        .collect();
    // for each z power, interpolate over y
    let mut out = vec![vec![0u64; nz + 1]; ny + 1];
    for k in 0..=nz {
        let vals: Vec<u64> = per_y.iter().map(|v| *v.get(k).unwrap_or(&0)).collect();
        let poly = interpolate(&ys, &vals, p);
        for (j, &c) in poly.iter().enumerate() {
            out[j][k] = c;
        }
    }
    out
}

/// `Res_x(f, g)` as a polynomial in `(y, z)`, with the Sylvester convention at
/// the formal `x`-degrees. Certified through a Goldstein–Graham bound.
pub fn resultant3(f: &Dense3, g: &Dense3) -> Dense2 {
    let (dfx, dgx) = (f.deg_x(), g.deg_x());
    let ny = dfx * g.deg_y() + dgx * f.deg_y();
    let nz = dfx * g.deg_z() + dgx * f.deg_z();
    if f.is_zero() || g.is_zero() {
        return vec![vec![BigInt::zero()]];
    }
    let bits = dgx as f64 * f.row_norm_log2() + dfx as f64 * g.row_norm_log2();
    let nprimes = primes_for_bits(bits.max(0.0));
    let mut crt = Crt::new((ny + 1) * (nz + 1));
    for k in 0..nprimes {
        let p = prime(k);
        let img = resultant3_image(f, g, ny, nz, p);
        let flat: Vec<u64> = img.into_iter().flatten().collect();
        crt.add(&flat, p);
    }
    let vals = crt.symmetric();
    let mut out: Dense2 = vals.chunks(nz + 1).map(|c| c.to_vec()).collect();
    trim_dense2(&mut out);
    out
}

pub fn trim_dense2(d: &mut Dense2) {
    for row in d.iter_mut() {
        while row.len() > 1 && row.last().is_some_and(|a| a.is_zero()) {
            row.pop();
        }
    }
    while d.len() > 1 && d.last().is_some_and(|r| r.iter().all(|a| a.is_zero())) {
        d.pop();
    }
}

/// Bivariate resultant `Res_x(f, g)` in `y` for `f, g` free of `z`.
pub fn resultant2(f: &Dense3, g: &Dense3) -> IntPoly {
    let d = resultant3(f, g);
    IntPoly::new(
        d.into_iter()
            .map(|r| r.into_iter().next().unwrap_or_default())
            .collect(),
    )
}

/// Coefficients `(s11, s10)` in `y` of the first subresultant `S1 = s11·x + s10`
/// of `f, g ∈ ℤ[x, y]` (no `z`), both of `x`-degree at least 2.
pub fn first_subresultant(f: &Dense3, g: &Dense3) -> (IntPoly, IntPoly) {
    let (m, n) = (f.deg_x(), g.deg_x());
    assert!(m >= 2 && n >= 2);
    let ny = (n - 1) * f.deg_y() + (m - 1) * g.deg_y();
    let bits = (n - 1) as f64 * f.row_norm_log2() + (m - 1) as f64 * g.row_norm_log2();
    let nprimes = primes_for_bits(bits.max(0.0));
    let size = m + n - 2;
    let mut crt = Crt::new(2 * (ny + 1));
    let ys: Vec<u64> = (0..=ny as u64).collect();
    for k in 0..nprimes {
        let p = prime(k);
        let (fm, gm) = (f.reduce(p), g.reduce(p));
        let mut v11 = Vec::with_capacity(ny + 1);
        let mut v10 = Vec::with_capacity(ny + 1);
        for &y0 in &ys {
            let a = fm.eval_yz(y0, 0);
            let b = gm.eval_yz(y0, 0);
            // rows: x^{n-2} f .. f, x^{m-2} g .. g; columns by descending power m+n-2 .. 0
            let mut rows: Vec<Vec<u64>> = Vec::with_capacity(size);
            for (poly, deg, count) in [(&a, m, n - 1), (&b, n, m - 1)] {
                for s in (0..count).rev() {
                    let mut row = vec![0u64; size + 1];
                    for (j, &c) in poly.iter().enumerate().take(deg + 1) {
                        let pw = j + s;
                        row[size - pw] = c;
                    }
                    rows.push(row);
                }
            }
            let m11: Vec<Vec<u64>> = rows.iter().map(|r| r[..size].to_vec()).collect();
            let m10: Vec<Vec<u64>> = rows
                .iter()
                .map(|r| {
                    let mut v = r[..size - 1].to_vec();
                    v.push(r[size]);
                    v
                })
                .collect();
            v11.push(det(m11, p));
            v10.push(det(m10, p));
        }
        let mut s11 = interpolate(&ys, &v11, p);
        let mut s10 = interpolate(&ys, &v10, p);
        s11.resize(ny + 1, 0);
        s10.resize(ny + 1, 0);
        s11.extend(s10);
        crt.add(&s11, p);
    }
    let vals = crt.symmetric();
    (
        IntPoly::new(vals[..ny + 1].to_vec()),
        IntPoly::new(vals[ny + 1..].to_vec()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_are_prime_and_large() {
        let p = prime(0);
        assert!(is_prime(p));
        assert!(p < 1 << 62 && p > 1 << 61);
        assert!(prime(3) < prime(2));
        assert!(!is_prime(prime(0) - 2) || prime(1) == prime(0) - 2);
    }

    #[test]
    fn modular_resultant_matches_small_case() {
        let p = prime(0);
        // Res_x(x^2 - 2, x - 1) = -1
        let f = vec![p - 2, 0, 1];
        let g = vec![p - 1, 1];
        assert_eq!(resultant(&f, 2, &g, 1, p), p - 1);
        // formal degree padding: Res_{1,1}(x - a, b) = b
        assert_eq!(resultant(&[p - 3, 1], 1, &[5], 1, p), 5);
    }

    #[test]
    fn interpolation_roundtrip() {
        let p = prime(1);
        let poly = vec![3u64, 0, 7, 1];
        let xs: Vec<u64> = (0..4).collect();
        let ys: Vec<u64> = xs.iter().map(|&x| eval(&poly, x, p)).collect();
        assert_eq!(interpolate(&xs, &ys, p), poly);
    }

    #[test]
    fn crt_and_reconstruction() {
        let target = BigInt::from(-123456789012345678i64) * BigInt::from(987654321u64);
        let mut crt = Crt::new(1);
        for k in 0..3 {
            let p = prime(k);
            crt.add(&[big_mod(&target, p)], p);
        }
        assert_eq!(crt.symmetric()[0], target);
        let m = crt.modulus.clone();
        // 7/13 mod M
        let d = BigInt::from(13);
        let e = d.extended_gcd(&m);
        let a = (BigInt::from(7) * e.x).mod_floor(&m);
        assert_eq!(rational_reconstruct(&a, &m), Some((BigInt::from(7), BigInt::from(13))));
    }

    #[test]
    fn inverse_mod_poly() {
        let p = prime(0);
        let m = vec![p - 2, 0, 1]; // x^2 - 2
        let a = vec![1, 1]; // x + 1
        let inv = inv_mod_poly(&a, &m, p).unwrap();
        assert_eq!(rem(&mul(&a, &inv, p), &m, p), vec![1]);
        assert!(inv_mod_poly(&[p - 1, 1], &[p - 1, 0, 1], p).is_none());
    }
}
