//! Dyadic numbers, outward-rounded intervals over them, and integer polynomials
//! prepared for evaluation on boxes in the positive orthant.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_core::{IntPoly, MPoly, Rat, Var};

/// Exact dyadic rational `m·2^e`.
#[derive(Clone, Debug)]
pub struct Dy {
    m: BigInt,
    e: i64,
}

impl Dy {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Self { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        Self {
            m: m >> tz as usize,
            e: e + tz as i64,
        }
    }

    pub fn zero() -> Self {
        Self {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn int(k: i64) -> Self {
        Self::new(BigInt::from(k), 0)
    }

    pub fn from_big(m: BigInt) -> Self {
        Self::new(m, 0)
    }

    /// Exact value of a finite `f64`.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Self::new(BigInt::from(mant) * sign, e)
    }

    pub fn to_f64(&self) -> f64 {
        let b = self.m.bits() as i64;
        let (m, e) = if b > 60 {
            ((&self.m >> (b - 60) as usize).to_f64().unwrap(), self.e + b - 60)
        } else {
            (self.m.to_f64().unwrap(), self.e)
        };
        let e = e.clamp(-2200, 2200) as i32;
        // split the scaling so intermediate powers stay normal
        m * 2f64.powi(e / 2) * 2f64.powi(e - e / 2)
    }

    pub fn to_rat(&self) -> Rat {
        if self.e >= 0 {
            Rat::from_integer(&self.m << self.e as usize)
        } else {
            Rat::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// Largest dyadic with a `prec`-bit mantissa that is ≤ `r`.
    pub fn floor_rat(r: &Rat, prec: u64) -> Self {
        let shift = prec as i64 - (r.numer().bits() as i64 - r.denom().bits() as i64);
        let scaled = if shift >= 0 {
            (r.numer() << shift as usize).div_floor(r.denom())
        } else {
            r.numer().div_floor(&(r.denom() << (-shift) as usize))
        };
        Self::new(scaled, -shift)
    }

    pub fn ceil_rat(r: &Rat, prec: u64) -> Self {
        Self::floor_rat(&-r, prec).neg()
    }

    /// Exact when `r` is dyadic, otherwise `None`.
    pub fn exact_rat(r: &Rat) -> Option<Self> {
        let d = r.denom();
        if (d & (d - BigInt::one())).is_zero() {
            Some(Self::new(r.numer().clone(), -((d.bits() - 1) as i64)))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.m.is_positive() {
            1
        } else if self.m.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn neg(&self) -> Self {
        Self { m: -&self.m, e: self.e }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        Self::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        Self {
            m: &self.m * &o.m,
            e: self.e + o.e,
        }
    }

    pub fn half(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m.clone(),
            e: self.e - 1,
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            m: self.m.abs(),
            e: self.e,
        }
    }

    /// Round toward −∞ to at most `prec` mantissa bits.
    pub fn floor_prec(&self, prec: u64) -> Self {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let s = b - prec;
        Self::new(&self.m >> s as usize, self.e + s as i64)
    }

    pub fn ceil_prec(&self, prec: u64) -> Self {
        self.neg().floor_prec(prec).neg()
    }

    /// Round toward −∞ to a multiple of 2^e.
    pub fn floor_exp(&self, e: i64) -> Self {
        if self.e >= e {
            return self.clone();
        }
        Self::new(&self.m >> (e - self.e) as usize, e)
    }

    pub fn ceil_exp(&self, e: i64) -> Self {
        self.neg().floor_exp(e).neg()
    }

    /// ⌊r·2^-e⌋·2^e.
    pub fn floor_rat_exp(r: &Rat, e: i64) -> Self {
        let scaled = if e <= 0 {
            (r.numer() << (-e) as usize).div_floor(r.denom())
        } else {
            r.numer().div_floor(&(r.denom() << e as usize))
        };
        Self::new(scaled, e)
    }

    pub fn ceil_rat_exp(r: &Rat, e: i64) -> Self {
        Self::floor_rat_exp(&-r, e).neg()
    }

    /// ⌊log2 |x|⌋ for x ≠ 0.
    pub fn log2(&self) -> i64 {
        self.m.bits() as i64 - 1 + self.e
    }
}

impl PartialEq for Dy {
    fn eq(&self, o: &Self) -> bool {
        self.m == o.m && self.e == o.e
    }
}

impl Eq for Dy {}

impl Ord for Dy {
    fn cmp(&self, o: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), o.signum());
        if sa != sb || sa == 0 {
            return sa.cmp(&sb);
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &o.m << (o.e - e) as usize;
        a.cmp(&b)
    }
}

impl PartialOrd for Dy {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Iv {
    pub lo: Dy,
    pub hi: Dy,
}

impl Iv {
    pub fn new(lo: Dy, hi: Dy) -> Self {
        debug_assert!(lo <= hi);
        Self { lo, hi }
    }

    pub fn point(x: Dy) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    /// Smallest `prec`-bit dyadic interval containing `[lo, hi]`.
    pub fn from_rats(lo: &Rat, hi: &Rat, prec: u64) -> Self {
        let l = Dy::exact_rat(lo).unwrap_or_else(|| Dy::floor_rat(lo, prec));
        let h = Dy::exact_rat(hi).unwrap_or_else(|| Dy::ceil_rat(hi, prec));
        Self::new(l, h)
    }

    pub fn width(&self) -> Dy {
        self.hi.sub(&self.lo)
    }

    pub fn mid(&self) -> Dy {
        self.lo.add(&self.hi).half()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Dy) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    /// Sign when it is the same over the whole interval; a zero point gives `Some(0)`.
    pub fn sign(&self) -> Option<i32> {
        if self.lo.signum() > 0 {
            Some(1)
        } else if self.hi.signum() < 0 {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        Self::new(self.hi.neg(), self.lo.neg())
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.lo.add(&o.lo), self.hi.add(&o.hi))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(self.lo.sub(&o.hi), self.hi.sub(&o.lo))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Self::new(lo, hi)
    }

    pub fn scale(&self, k: &Dy) -> Self {
        self.mul(&Self::point(k.clone()))
    }

    pub fn intersect(&self, o: &Self) -> Option<Self> {
        let lo = (&self.lo).max(&o.lo).clone();
        let hi = (&self.hi).min(&o.hi).clone();
        (lo <= hi).then(|| Self::new(lo, hi))
    }

    /// `self` lies strictly inside `o`.
    pub fn interior_of(&self, o: &Self) -> bool {
        self.lo > o.lo && self.hi < o.hi
    }

    pub fn hull(&self, o: &Self) -> Self {
        Self::new((&self.lo).min(&o.lo).clone(), (&self.hi).max(&o.hi).clone())
    }

    pub fn disjoint(&self, o: &Self) -> bool {
        self.hi < o.lo || o.hi < self.lo
    }

    pub fn split(&self) -> (Self, Self) {
        let m = self.mid();
        (Self::new(self.lo.clone(), m.clone()), Self::new(m, self.hi.clone()))
    }

    /// Outward rounding of both endpoints to `prec` mantissa bits.
    pub fn round(&self, prec: u64) -> Self {
        Self::new(self.lo.floor_prec(prec), self.hi.ceil_prec(prec))
    }

    /// Outward rounding of both endpoints to multiples of 2^e.
    pub fn round_abs(&self, e: i64) -> Self {
        Self::new(self.lo.floor_exp(e), self.hi.ceil_exp(e))
    }

    pub fn to_rats(&self) -> (Rat, Rat) {
        (self.lo.to_rat(), self.hi.to_rat())
    }
}

/// Integer polynomial in a fixed list of variables, with monomials stored densely
/// by exponent vector. Scaling from rational input is by a positive constant, so
/// signs and zero sets are preserved.
#[derive(Clone, Debug, PartialEq)]
pub struct IPoly {
    pub vars: Vec<Var>,
    terms: Vec<(Vec<u32>, BigInt)>,
    deg: Vec<u32>,
}

impl IPoly {
    pub fn from_mpoly(f: &MPoly, vars: &[Var]) -> Self {
        let l = f.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut terms = vec![];
        let mut deg = vec![0u32; vars.len()];
        for (e, c) in f.terms() {
            for v in Var::ALL {
                assert!(
                    e[v.idx()] == 0 || vars.contains(&v),
                    "variable {} not in evaluation list",
                    v.name()
                );
            }
            let ex: Vec<u32> = vars.iter().map(|v| e[v.idx()]).collect();
            for (d, &k) in deg.iter_mut().zip(&ex) {
                *d = (*d).max(k);
            }
            terms.push((ex, (c * Rat::from_integer(l.clone())).to_integer()));
        }
        Self {
            vars: vars.to_vec(),
            terms,
            deg,
        }
    }

    /// Univariate integer polynomial as an `IPoly` in `v`.
    pub fn univariate(f: &IntPoly, v: Var) -> Self {
        let terms: Vec<(Vec<u32>, BigInt)> = f
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (vec![k as u32], c.clone()))
            .collect();
        Self {
            vars: vec![v],
            terms,
            deg: vec![f.degree().unwrap_or(0) as u32],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self, k: usize) -> u32 {
        self.deg[k]
    }

    pub fn to_mpoly(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let pw: Vec<(Var, u32)> = self.vars.iter().copied().zip(e.iter().copied()).collect();
            out = &out + &MPoly::monomial(Rat::from_integer(c.clone()), &pw);
        }
        out
    }

    /// Univariate polynomial when only one listed variable remains.
    pub fn to_intpoly(&self) -> IntPoly {
        assert_eq!(self.vars.len(), 1);
        let mut c = vec![BigInt::zero(); self.deg[0] as usize + 1];
        for (e, a) in &self.terms {
            c[e[0] as usize] += a;
        }
        IntPoly::new(c)
    }

    pub fn derivative(&self, k: usize) -> Self {
        let terms: Vec<(Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .filter(|(e, _)| e[k] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[k] -= 1;
                (e2, c * BigInt::from(e[k]))
            })
            .collect();
        let mut deg = self.deg.clone();
        deg[k] = deg[k].saturating_sub(1);
        Self {
            vars: self.vars.clone(),
            terms,
            deg,
        }
    }

    /// Substitutes a rational value for variable `k` and clears denominators.
    pub fn fix(&self, k: usize, v: &Rat) -> Self {
        let m = self.to_mpoly();
        let fixed = m.eval_partial(&[(self.vars[k], v.clone())]);
        let vars: Vec<Var> = self
            .vars
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, v)| *v)
            .collect();
        Self::from_mpoly(&fixed, &vars)
    }

    fn powers(&self, x: &[Dy]) -> Vec<Vec<Dy>> {
        x.iter()
            .zip(&self.deg)
            .map(|(xi, &d)| {
                let mut v = Vec::with_capacity(d as usize + 1);
                v.push(Dy::int(1));
                for j in 0..d as usize {
                    let next = v[j].mul(xi);
                    v.push(next);
                }
                v
            })
            .collect()
    }

    pub fn eval_point(&self, x: &[Dy]) -> Dy {
        let pw = self.powers(x);
        let mut acc = Dy::zero();
        for (e, c) in &self.terms {
            let mut t = Dy::from_big(c.clone());
            for (j, &k) in e.iter().enumerate() {
                t = t.mul(&pw[j][k as usize]);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Enclosure of the range over a box. On the nonnegative orthant every
    /// monomial is monotone, so positive and negative parts are bounded at the corners.
    pub fn eval_box(&self, x: &[Iv]) -> Iv {
        if x.iter().all(|i| i.lo.signum() >= 0) {
            let lo: Vec<Dy> = x.iter().map(|i| i.lo.clone()).collect();
            let hi: Vec<Dy> = x.iter().map(|i| i.hi.clone()).collect();
            let (pl, ph) = (self.powers(&lo), self.powers(&hi));
            let (mut a, mut b) = (Dy::zero(), Dy::zero());
            for (e, c) in &self.terms {
                let mut tl = Dy::from_big(c.clone());
                let mut th = tl.clone();
                for (j, &k) in e.iter().enumerate() {
                    tl = tl.mul(&pl[j][k as usize]);
                    th = th.mul(&ph[j][k as usize]);
                }
                if c.is_positive() {
                    a = a.add(&tl);
                    b = b.add(&th);
                } else {
                    a = a.add(&th);
                    b = b.add(&tl);
                }
            }
            return Iv::new(a, b);
        }
        // general case: naive interval arithmetic
        let mut acc = Iv::point(Dy::zero());
        for (e, c) in &self.terms {
            let mut t = Iv::point(Dy::from_big(c.clone()));
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = t.mul(&x[j]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn dyadic_basics() {
        let a = Dy::from_f64(0.375);
        assert_eq!(a.to_rat(), ratio(3, 8));
        assert_eq!(Dy::from_f64(-1.5e-300).to_f64(), -1.5e-300);
        assert!(Dy::int(3) > Dy::from_f64(2.9999));
        assert_eq!(a.add(&Dy::int(1)).to_rat(), ratio(11, 8));
        let third = ratio(1, 3);
        let lo = Dy::floor_rat(&third, 40);
        let hi = Dy::ceil_rat(&third, 40);
        assert!(lo.to_rat() < third && third < hi.to_rat());
        assert!(hi.sub(&lo).to_f64() < 1e-11);
        assert_eq!(Dy::exact_rat(&ratio(5, 16)).unwrap().to_rat(), ratio(5, 16));
        assert!(Dy::exact_rat(&ratio(1, 3)).is_none());
        let m = Dy::from_f64(-2.75);
        assert_eq!(m.floor_exp(0).to_rat(), rat(-3));
        assert_eq!(m.ceil_exp(0).to_rat(), rat(-2));
        assert_eq!(Dy::floor_rat_exp(&ratio(-1, 3), -2).to_rat(), ratio(-1, 2));
        assert_eq!(Dy::ceil_rat_exp(&ratio(-1, 3), -2).to_rat(), ratio(-1, 4));
    }

    #[test]
    fn box_enclosure() {
        let p = MPoly::var(Var::P);
        let q = MPoly::var(Var::Q);
        // p^2 - 3pq + 1
        let f = &(&p.pow(2) - &(&p * &q).scale(&rat(3))) + &MPoly::int(1);
        let ip = IPoly::from_mpoly(&f, &[Var::P, Var::Q]);
        let b = [Iv::new(Dy::int(1), Dy::int(2)), Iv::new(Dy::from_f64(0.5), Dy::int(1))];
        let r = ip.eval_box(&b);
        assert_eq!(r.lo.to_rat(), rat(-4));
        assert_eq!(r.hi.to_rat(), ratio(7, 2));
        assert_eq!(ip.eval_point(&[Dy::int(2), Dy::int(1)]).to_rat(), rat(-1));
    }

    proptest! {
        #[test]
        fn enclosure_contains_samples(
            c in prop::collection::vec(-20i64..20, 6),
            a in 0u32..64, w in 1u32..64, b in 0u32..64, u in 1u32..64,
            s in 0u32..=16, t in 0u32..=16,
        ) {
            let p = MPoly::var(Var::P);
            let q = MPoly::var(Var::Q);
            let mons = [MPoly::one(), p.clone(), q.clone(), &p * &q, p.pow(3), q.pow(2)];
            let f = mons.iter().zip(&c).fold(MPoly::zero(), |acc, (m, &k)| &acc + &m.scale(&rat(k)));
            let ip = IPoly::from_mpoly(&f, &[Var::P, Var::Q]);
            let to = |k: u32| Dy::new(BigInt::from(k), -4);
            let bx = [Iv::new(to(a), to(a + w)), Iv::new(to(b), to(b + u))];
            let r = ip.eval_box(&bx);
            let xp = to(a).add(&Dy::new(BigInt::from(w * s), -8));
            let xq = to(b).add(&Dy::new(BigInt::from(u * t), -8));
            let v = ip.eval_point(&[xp.clone(), xq.clone()]);
            prop_assert!(r.contains(&v));
            let exact = f.eval(&[(Var::P, xp.to_rat()), (Var::Q, xq.to_rat())]);
            prop_assert_eq!(v.to_rat(), exact);
        }
    }
}
