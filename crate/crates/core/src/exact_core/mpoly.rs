use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{fmt_rat, Rat, UPoly};
use crate::error::{MsrsError, Result};

pub const NVARS: usize = 7;

/// The global variable order. Term maps sort lexicographically in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Sigma,
    P,
    Q,
    Z,
    S,
    U,
    W,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::Sigma, Var::P, Var::Q, Var::Z, Var::S, Var::U, Var::W];

    pub fn idx(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::Sigma => "σ",
            Var::P => "p",
            Var::Q => "q",
            Var::Z => "z",
            Var::S => "s",
            Var::U => "u",
            Var::W => "w",
        }
    }
}

pub type Exp = [u32; NVARS];

/// Sparse polynomial over ℚ. No zero coefficients are stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Exp, Rat>,
}

fn mono(v: Var, k: u32) -> Exp {
    let mut e = [0; NVARS];
    e[v.idx()] = k;
    e
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Self::zero();
        p.add_term([0; NVARS], c);
        p
    }

    pub fn int(c: i64) -> Self {
        Self::constant(Rat::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Rat::one(), &[(v, 1)])
    }

    pub fn monomial(c: Rat, powers: &[(Var, u32)]) -> Self {
        let mut e = [0; NVARS];
        for &(v, k) in powers {
            e[v.idx()] += k;
        }
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exp, Rat)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&[0; NVARS]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.idx()]).max().unwrap_or(0)
    }

    pub fn min_degree(&self, v: Var) -> u32 {
        self.terms.keys().map(|e| e[v.idx()]).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Variables that actually occur, in global order.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|e| e[v.idx()] > 0))
            .collect()
    }

    pub fn is_univariate_in(&self, v: Var) -> bool {
        self.vars().iter().all(|&w| w == v)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, v: Var, k: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| {
                    let mut e = *e;
                    e[v.idx()] += k;
                    (e, a.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coeffs(&self, v: Var) -> Vec<MPoly> {
        if self.is_zero() {
            return vec![];
        }
        let mut out = vec![MPoly::zero(); self.degree(v) as usize + 1];
        for (e, c) in &self.terms {
            let k = e[v.idx()] as usize;
            let mut e2 = *e;
            e2[v.idx()] = 0;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    pub fn from_coeffs(v: Var, cs: &[MPoly]) -> Self {
        let mut p = Self::zero();
        for (k, c) in cs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = *e;
                e2[v.idx()] += k as u32;
                p.add_term(e2, a.clone());
            }
        }
        p
    }

    /// Leading coefficient with respect to `v`.
    pub fn lc(&self, v: Var) -> MPoly {
        self.coeffs(v).pop().unwrap_or_default()
    }

    /// Lexicographically leading term (global variable order).
    pub fn leading_term(&self) -> Option<(&Exp, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn derivative(&self, v: Var) -> Self {
        let i = v.idx();
        let mut p = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = *e;
                e2[i] -= 1;
                p.add_term(e2, c * Rat::from_integer(BigInt::from(e[i])));
            }
        }
        p
    }

    /// Simultaneous substitution of polynomials for variables.
    pub fn substitute(&self, bindings: &[(Var, MPoly)]) -> Self {
        let mut bound: [Option<&MPoly>; NVARS] = [None; NVARS];
        for (v, b) in bindings {
            bound[v.idx()] = Some(b);
        }
        let mut pows: Vec<Vec<MPoly>> = vec![vec![MPoly::one()]; NVARS];
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut free = *e;
            let mut t = MPoly::constant(c.clone());
            for i in 0..NVARS {
                if let Some(b) = bound[i] {
                    free[i] = 0;
                    let k = e[i] as usize;
                    while pows[i].len() <= k {
                        let next = pows[i].last().unwrap() * b;
                        pows[i].push(next);
                    }
                    if k > 0 {
                        t = &t * &pows[i][k];
                    }
                }
            }
            for (e2, a) in t.terms {
                let mut e3 = e2;
                for i in 0..NVARS {
                    e3[i] += free[i];
                }
                out.add_term(e3, a);
            }
        }
        out
    }

    /// Substitutes rational values; remaining variables stay symbolic.
    pub fn eval_partial(&self, vals: &[(Var, Rat)]) -> Self {
        let mut out = Self::zero();
        let mut pows: Vec<Vec<Rat>> = vec![vec![Rat::one()]; NVARS];
        let mut val: [Option<&Rat>; NVARS] = [None; NVARS];
        for (v, r) in vals {
            val[v.idx()] = Some(r);
        }
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let mut a = c.clone();
            for i in 0..NVARS {
                if let Some(r) = val[i] {
                    let k = e[i] as usize;
                    while pows[i].len() <= k {
                        let next = pows[i].last().unwrap() * r;
                        pows[i].push(next);
                    }
                    a *= &pows[i][k];
                    e2[i] = 0;
                }
            }
            out.add_term(e2, a);
        }
        out
    }

    /// Full evaluation; panics if a variable is left unbound.
    pub fn eval(&self, vals: &[(Var, Rat)]) -> Rat {
        self.eval_partial(vals)
            .constant_value()
            .expect("eval: unbound variable")
    }

    pub fn eval_f64(&self, vals: &[(Var, f64)]) -> f64 {
        let mut x = [0.0f64; NVARS];
        for (v, r) in vals {
            x[v.idx()] = *r;
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = super::rat_to_f64(c);
                for i in 0..NVARS {
                    if e[i] > 0 {
                        t *= x[i].powi(e[i] as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Exact quotient `self / g`, or `NotDivisible`.
    pub fn exact_div(&self, g: &MPoly) -> Result<MPoly> {
        if g.is_zero() {
            return Err(MsrsError::NotDivisible);
        }
        if let Some(c) = g.constant_value() {
            return Ok(self.scale(&(Rat::one() / c)));
        }
        let (ge, gc) = g.leading_term().map(|(e, c)| (*e, c.clone())).unwrap();
        let mut r = self.clone();
        let mut q = MPoly::zero();
        while let Some((re, rc)) = r.leading_term().map(|(e, c)| (*e, c.clone())) {
            let mut te = [0; NVARS];
            for i in 0..NVARS {
                if re[i] < ge[i] {
                    return Err(MsrsError::NotDivisible);
                }
                te[i] = re[i] - ge[i];
            }
            let tc = rc / &gc;
            for (e, c) in &g.terms {
                let mut e2 = *e;
                for i in 0..NVARS {
                    e2[i] += te[i];
                }
                r.add_term(e2, -(c * &tc));
            }
            q.add_term(te, tc);
        }
        Ok(q)
    }

    /// Positive rational `c` such that `self / c` has coprime integer coefficients.
    pub fn content(&self) -> Rat {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            return Rat::one();
        }
        Rat::new(num, den)
    }

    /// Integer primitive part with positive lexicographic leading coefficient.
    pub fn primitive(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let mut c = self.content();
        if self.leading_term().unwrap().1.is_negative() {
            c = -c;
        }
        self.scale(&(Rat::one() / c))
    }

    /// Removes the largest monomial factor.
    pub fn strip_monomial(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let mut m = [u32::MAX; NVARS];
        for e in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].min(e[i]);
            }
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    for i in 0..NVARS {
                        e2[i] -= m[i];
                    }
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// True when every coefficient is nonnegative and the constant term is positive,
    /// a sufficient test for positivity on the closed positive orthant.
    pub fn positive_on_orthant(&self) -> bool {
        self.constant_term().is_positive() && self.terms.values().all(|c| !c.is_negative())
    }

    pub fn to_upoly(&self, v: Var) -> Option<UPoly> {
        if !self.is_univariate_in(v) {
            return None;
        }
        let mut c = vec![Rat::zero(); self.degree(v) as usize + 1];
        for (e, a) in &self.terms {
            c[e[v.idx()] as usize] = a.clone();
        }
        Some(UPoly::new(c))
    }

    pub fn from_upoly(u: &UPoly, v: Var) -> Self {
        Self::from_terms(
            u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (mono(v, k as u32), c.clone())),
        )
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let is_const = e.iter().all(|&k| k == 0);
            let mut parts = vec![];
            if !a.is_one() || is_const {
                parts.push(fmt_rat(&a));
            }
            for v in Var::ALL {
                match e[v.idx()] {
                    0 => {}
                    1 => parts.push(v.name().to_string()),
                    k => parts.push(format!("{}^{}", v.name(), k)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl Add<&MPoly> for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub<&MPoly> for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul<&MPoly> for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let mut e = *e1;
                for i in 0..NVARS {
                    e[i] += e2[i];
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
