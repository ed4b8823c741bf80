use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Rat, UPoly};
use crate::modular;

/// Dense univariate polynomial over ℤ, coefficients ascending by degree.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&k| BigInt::from(k)).collect())
    }

    /// Clears denominators of a rational coefficient vector.
    pub fn from_rats(c: &[Rat]) -> Self {
        let l = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        Self::new(c.iter().map(|x| x.numer() * (&l / x.denom())).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn to_upoly(&self) -> UPoly {
        UPoly::new(self.c.iter().map(|a| Rat::from_integer(a.clone())).collect())
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::default();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        Self::new(self.c.iter().map(|a| a / &g).collect())
    }

    /// Removes the largest power of `x` dividing the polynomial; returns it too.
    pub fn strip_x(&self) -> (Self, usize) {
        let k = self.c.iter().take_while(|a| a.is_zero()).count();
        if k == self.c.len() {
            return (Self::default(), 0);
        }
        (Self::new(self.c[k..].to_vec()), k)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|k| self.c.get(k).unwrap_or(&z) + o.c.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|k| self.c.get(k).unwrap_or(&z) - o.c.get(k).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        Self::new(self.c.iter().map(|a| a * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * BigInt::from(k))
                .collect(),
        )
    }

    /// Exact quotient over ℤ, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero());
        if self.is_zero() {
            return Some(Self::default());
        }
        if self.c.len() < d.c.len() {
            return None;
        }
        let dd = d.c.len() - 1;
        let lc = d.lc();
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let (t, rem) = r[k + dd].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            if !t.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] -= &t * b;
                }
            }
            q[k] = t;
        }
        if r.iter().any(|a| !a.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    /// Value at a rational point, as `Σ c_k a^k b^(d-k)` (sign equals the sign at a/b for b > 0).
    pub fn eval_homog(&self, x: &Rat) -> BigInt {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // Horner on the homogenized form
        for c in self.c.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + Rat::from_integer(a.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &Rat) -> i32 {
        let v = self.eval_homog(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        int_gcd(self, o)
    }

    /// Primitive squarefree part with positive leading coefficient.
    pub fn squarefree(&self) -> Self {
        if self.deg() == 0 {
            return if self.is_zero() { Self::default() } else { Self::one() };
        }
        let g = self.gcd(&self.derivative());
        self.primitive().div_exact(&g).expect("gcd divides").primitive()
    }

    /// `(f_1, f_2, …)` with `f = c·∏ f_k^k`, each primitive and squarefree (Yun).
    pub fn squarefree_decomposition(&self) -> Vec<Self> {
        let f = self.to_upoly();
        if f.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.divrem(&a0).0;
        let c = fp.divrem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = vec![];
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.divrem(&a).0;
            let c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            out.push(a.to_intpoly().primitive());
        }
        while out.last().is_some_and(|x| x.deg() == 0) {
            out.pop();
        }
        out
    }

    /// Number of sign changes in the coefficient sequence.
    pub fn sign_variations(&self) -> usize {
        let mut last = 0i32;
        let mut v = 0;
        for a in &self.c {
            let s = if a.is_positive() {
                1
            } else if a.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    v += 1;
                }
                last = s;
            }
        }
        v
    }
}

/// Modular gcd over ℤ with exact trial-division verification.
fn int_gcd(f: &IntPoly, g: &IntPoly) -> IntPoly {
    if f.is_zero() {
        return g.primitive();
    }
    if g.is_zero() {
        return f.primitive();
    }
    let (f, g) = (f.primitive(), g.primitive());
    if f.deg() == 0 || g.deg() == 0 {
        return IntPoly::one();
    }
    let lcg = f.lc().gcd(&g.lc());
    let mut best_deg = usize::MAX;
    let mut crt: Option<modular::Crt> = None;
    let mut k = 0usize;
    loop {
        let p = modular::prime(k);
        k += 1;
        let lp = modular::big_mod(&lcg, p);
        if lp == 0 || modular::big_mod(&f.lc(), p) == 0 || modular::big_mod(&g.lc(), p) == 0 {
            continue;
        }
        let fp = modular::reduce(&f, p);
        let gp = modular::reduce(&g, p);
        let h = modular::gcd(&fp, &gp, p);
        let dh = h.len() - 1;
        if dh == 0 {
            return IntPoly::one();
        }
        if dh > best_deg {
            continue;
        }
        let mut img = modular::scale(&h, lp, p);
        img.resize(dh + 1, 0);
        if dh < best_deg {
            best_deg = dh;
            crt = Some(modular::Crt::new(dh + 1));
        }
        let c = crt.as_mut().unwrap();
        c.add(&img, p);
        let cand = IntPoly::new(c.symmetric()).primitive();
        if cand.deg() == best_deg && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
            return cand;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_squarefree() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, -2, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[-1, 1]));
        // (x-4)^2 (x-1)
        let f = IntPoly::from_i64(&[-4, 1])
            .mul(&IntPoly::from_i64(&[-4, 1]))
            .mul(&IntPoly::from_i64(&[-1, 1]));
        assert_eq!(
            f.squarefree(),
            IntPoly::from_i64(&[-4, 1]).mul(&IntPoly::from_i64(&[-1, 1]))
        );
        assert_eq!(
            IntPoly::from_i64(&[0, 0, 0, 5]).squarefree(),
            IntPoly::from_i64(&[0, 1])
        );
    }

    #[test]
    fn yun_decomposition() {
        let l1 = IntPoly::from_i64(&[1, 1]);
        let l2 = IntPoly::from_i64(&[-2, 0, 1]);
        let f = l1.mul(&l2).mul(&l2).scale(&BigInt::from(6));
        let d = f.squarefree_decomposition();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], l1);
        assert_eq!(d[1], l2);
    }

    #[test]
    fn homogeneous_eval_sign() {
        let f = IntPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(f.sign_at(&super::super::ratio(3, 2)), 1);
        assert_eq!(f.sign_at(&super::super::ratio(4, 3)), -1);
        assert_eq!(f.eval_homog(&super::super::ratio(1, 2)), BigInt::from(-7));
    }

    #[test]
    fn large_gcd_is_verified() {
        let mut g = IntPoly::from_i64(&[1]);
        for k in 1..12 {
            g = g.mul(&IntPoly::from_i64(&[-(k * 1_000_003), 7 * k + 1]));
        }
        let a = g.mul(&IntPoly::from_i64(&[5, 0, 3]));
        let b = g.mul(&IntPoly::from_i64(&[-11, 1, 2]));
        assert_eq!(a.gcd(&b), g.primitive());
    }
}
