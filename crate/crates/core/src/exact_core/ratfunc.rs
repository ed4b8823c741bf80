use std::fmt;

use num_traits::{One, Zero};

use super::{MPoly, Rat, Var};
use crate::error::{MsrsError, Result};

/// Quotient of two polynomials, kept normalized: integer content cancelled,
/// denominator primitive with positive leading coefficient, univariate gcds cancelled.
#[derive(Clone)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(MsrsError::DivisionByZeroFunction);
        }
        Ok(Self::normalized(num, den))
    }

    pub fn from_poly(p: MPoly) -> Self {
        Self {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(MPoly::constant(c))
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::from_poly(MPoly::zero());
        }
        if let Some(c) = den.constant_value() {
            return Self::from_poly(num.scale(&(Rat::one() / c)));
        }
        if let Ok(q) = num.exact_div(&den) {
            return Self::from_poly(q);
        }
        let (mut num, mut den) = (num, den);
        let vn = num.vars();
        let vd = den.vars();
        if vd.len() == 1 && (vn.is_empty() || vn == vd) {
            let v = vd[0];
            let g = super::univariate_gcd(&num, &den, v);
            if g.degree(v) > 0 {
                num = num.exact_div(&g).expect("gcd divides");
                den = den.exact_div(&g).expect("gcd divides");
            }
        }
        let dp = den.primitive();
        let c = den.leading_term().unwrap().1 / dp.leading_term().unwrap().1;
        Self {
            num: num.scale(&(Rat::one() / c)),
            den: dp,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(MsrsError::DivisionByZeroFunction);
        }
        Ok(Self::normalized(&self.num * &o.den, &self.den * &o.num))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Quotient rule.
    pub fn derivative(&self, v: Var) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::normalized(n, &self.den * &self.den)
    }

    pub fn substitute(&self, bindings: &[(Var, MPoly)]) -> Result<Self> {
        Self::new(self.num.substitute(bindings), self.den.substitute(bindings))
    }

    pub fn eval_partial(&self, vals: &[(Var, Rat)]) -> Result<Self> {
        Self::new(self.num.eval_partial(vals), self.den.eval_partial(vals))
    }

    /// Full evaluation; `None` where the denominator vanishes.
    pub fn eval(&self, vals: &[(Var, Rat)]) -> Option<Rat> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(vals) / d)
    }

    pub fn eval_f64(&self, vals: &[(Var, f64)]) -> f64 {
        self.num.eval_f64(vals) / self.den.eval_f64(vals)
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        Self::from_poly(p)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        Self::from_poly(MPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: RatFunc) -> RatFunc {
        RatFunc::add(&self, &o)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> MPoly {
        MPoly::var(Var::Q)
    }
    fn p() -> MPoly {
        MPoly::var(Var::P)
    }
    fn z() -> MPoly {
        MPoly::var(Var::Z)
    }
    fn s() -> MPoly {
        MPoly::var(Var::Sigma)
    }
    fn rf(n: MPoly, d: MPoly) -> RatFunc {
        RatFunc::new(n, d).unwrap()
    }

    #[test]
    fn common_denominator() {
        let d1 = MPoly::one() + MPoly::int(3) * q().pow(4);
        let d2 = MPoly::one() + p().pow(4) + MPoly::int(2) * q().pow(4);
        let a = rf(MPoly::one(), d1.clone());
        let b = rf(MPoly::one(), d2.clone());
        let want = rf(p().pow(4) - q().pow(4), &d1 * &d2);
        assert_eq!(a.sub(&b), want);
    }

    #[test]
    fn self_division_is_one() {
        let f = rf(s() + q(), MPoly::one() + q().pow(2));
        let one = f.div(&f).unwrap();
        assert_eq!(one.num(), &MPoly::one());
        assert_eq!(one.den(), &MPoly::one());
        assert_eq!(f.div(&RatFunc::zero()).unwrap_err(), MsrsError::DivisionByZeroFunction);
    }

    #[test]
    fn quotient_rule() {
        let d = MPoly::one() + MPoly::int(3) * z().pow(4);
        let f = rf(s(), d.clone());
        let want = rf(MPoly::int(-12) * s() * z().pow(3), &d * &d);
        assert_eq!(f.derivative(Var::Z), want);
        assert_eq!(f.derivative(Var::Sigma), rf(MPoly::one(), d));
        assert!(RatFunc::constant(Rat::from_integer(7.into()))
            .derivative(Var::Z)
            .is_zero());
    }

    #[test]
    fn univariate_gcd_cancels() {
        let f = rf(q().pow(2) - MPoly::one(), q() - MPoly::one());
        assert_eq!(f.den(), &MPoly::one());
        let g = rf(
            q().pow(2) - MPoly::one(),
            q().pow(2) + MPoly::int(2) * q() + MPoly::one(),
        );
        assert_eq!(g.den(), &(q() + MPoly::one()));
    }
}
