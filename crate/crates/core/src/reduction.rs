//! Diagonal and two-value templates of the MSRS, with the closed-form eigenvalue
//! expressions G1..G4 of the Jacobian at a template point.
//!
//! All polynomials live in the stored variables: `q` (and `p`) stand for
//! z = x^(1/b) when the cooperativity has denominator b.

use crate::error::{MsrsError, Result};
use crate::exact_core::{rat, MPoly, RatFunc, UPoly, Var};
use crate::model::MsrsModel;

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedDiagonal {
    pub f: RatFunc,
    pub g1: RatFunc,
    pub g2: RatFunc,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReducedNonDiagonal {
    pub i: u32,
    pub f1: RatFunc,
    pub f2: RatFunc,
    pub g1: RatFunc,
    pub g2: RatFunc,
    pub g3: RatFunc,
    pub g4: RatFunc,
}

impl ReducedNonDiagonal {
    pub fn gs(&self) -> [&RatFunc; 4] {
        [&self.g1, &self.g2, &self.g3, &self.g4]
    }
}

fn rf(num: MPoly, den: MPoly) -> RatFunc {
    RatFunc::new(num, den).expect("nonzero denominator")
}

/// Pieces of one template: s = i·ψ(p) + (n−i)·ψ(q), A(s), A'(s).
pub struct Template<'a> {
    m: &'a MsrsModel,
    pub a_s: MPoly,
    pub ap_s: MPoly,
}

impl<'a> Template<'a> {
    /// `i` copies of `p`, the rest `q`; `i = 0` is the diagonal.
    pub fn new(m: &'a MsrsModel, i: u32) -> Self {
        let p = MPoly::var(Var::P);
        let q = MPoly::var(Var::Q);
        let s = &m.psi.compose_mpoly(&p).scale(&rat(i as i64)) + &m.psi.compose_mpoly(&q).scale(&rat((m.n - i) as i64));
        Self {
            m,
            a_s: m.a.compose_mpoly(&s),
            ap_s: m.a.derivative().compose_mpoly(&s),
        }
    }

    fn at(&self, u: &UPoly, y: &MPoly) -> MPoly {
        u.compose_mpoly(y)
    }

    /// A(s) + h(y), the denominator of f_k when x_k = y.
    pub fn den(&self, y: &MPoly) -> MPoly {
        &self.a_s + &self.at(&self.m.h, y)
    }

    /// b·y^(b−1): dz/dx in stored coordinates is 1 over this.
    fn chain(&self, y: &MPoly) -> MPoly {
        let b = self.m.c_den;
        y.pow(b - 1).scale(&rat(b as i64))
    }

    /// f_k with x_k = y.
    pub fn f(&self, y: &MPoly) -> RatFunc {
        let d = self.den(y);
        let sigma = MPoly::var(Var::Sigma);
        let num = &(&sigma * &self.at(&self.m.g, y)) - &(&self.at(&self.m.l, y) * &d);
        rf(num, d)
    }

    /// ∂f_k/∂x_k with x_k = y (chain rule through A and ψ).
    pub fn own(&self, y: &MPoly) -> RatFunc {
        let m = self.m;
        let d = self.den(y);
        let sigma = MPoly::var(Var::Sigma);
        let dd = &(&self.ap_s * &self.at(&m.psi.derivative(), y)) + &self.at(&m.h.derivative(), y);
        let quot = &(&self.at(&m.g.derivative(), y) * &d) - &(&self.at(&m.g, y) * &dd);
        let num = &(&sigma * &quot) - &(&self.at(&m.l.derivative(), y) * &d.pow(2));
        rf(num, &d.pow(2) * &self.chain(y))
    }

    /// A'(s)·∂ψ(x_j)/∂x_j / D_k with x_j = yj, x_k = yk and D_k = −(A(s)+h(x_k))/l(x_k).
    pub fn cross(&self, yj: &MPoly, yk: &MPoly) -> RatFunc {
        let m = self.m;
        let num = &(&self.ap_s * &self.at(&m.psi.derivative(), yj)) * &self.at(&m.l, yk);
        rf(-num, &self.den(yk) * &self.chain(yj))
    }
}

pub fn diagonal_equilibrium(m: &MsrsModel) -> ReducedDiagonal {
    let t = Template::new(m, 0);
    let q = MPoly::var(Var::Q);
    let tau = t.own(&q);
    let xi = t.cross(&q, &q);
    ReducedDiagonal {
        f: t.f(&q),
        g1: tau.sub(&xi),
        g2: tau.add(&xi.scale(&rat(m.n as i64 - 1))),
    }
}

pub fn nondiagonal_equilibrium(m: &MsrsModel, i: u32) -> Result<ReducedNonDiagonal> {
    let n = m.n;
    if i < 1 || i > n / 2 {
        return Err(MsrsError::BadMultiplicity { i, max: n / 2 });
    }
    let t = Template::new(m, i);
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    // x_1 = p, x_n = q; x_2 is p only when i ≥ 2, x_{n−1} is q only when n − i ≥ 2.
    let x2 = if i >= 2 { &p } else { &q };
    let xn1 = if n - i >= 2 { &q } else { &p };
    let beta = t.own(&p);
    let tau = t.own(&q);
    let gamma = t.cross(x2, &p);
    let xi = t.cross(xn1, &q);
    let mu = t.cross(&q, &p);
    let nu = t.cross(&p, &q);
    let k = |v: u32| rat(v as i64);
    let left = beta.add(&gamma.scale(&k(i - 1)));
    let right = tau.add(&xi.scale(&k(n - i - 1)));
    let g3 = left.add(&right);
    let g4 = left.mul(&right).sub(&mu.mul(&nu).scale(&k(i * (n - i))));
    Ok(ReducedNonDiagonal {
        i,
        f1: t.f(&p),
        f2: t.f(&q),
        g1: tau.sub(&xi),
        g2: beta.sub(&gamma),
        g3,
        g4,
    })
}

/// `(num, den, den_positive)` with num/den = rf.
pub fn clear_denominators(rf: &RatFunc) -> (MPoly, MPoly, bool) {
    let den = rf.den().clone();
    let pos = den.positive_on_orthant();
    (rf.num().clone(), den, pos)
}

/// Δ with (p − q)·Δ = num(F1)·den(F2) − num(F2)·den(F1).
pub fn difference_poly(f1: &RatFunc, f2: &RatFunc) -> Result<MPoly> {
    let w = &(f1.num() * f2.den()) - &(f2.num() * f1.den());
    if w.is_zero() {
        return Ok(w);
    }
    w.exact_div(&(&MPoly::var(Var::P) - &MPoly::var(Var::Q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{ratio, Rat};
    use proptest::prelude::*;

    fn q() -> MPoly {
        MPoly::var(Var::Q)
    }
    fn p() -> MPoly {
        MPoly::var(Var::P)
    }
    fn s() -> MPoly {
        MPoly::var(Var::Sigma)
    }
    fn c(k: i64) -> MPoly {
        MPoly::int(k)
    }
    fn r(num: MPoly, den: MPoly) -> RatFunc {
        RatFunc::new(num, den).unwrap()
    }

    fn sd44() -> MsrsModel {
        MsrsModel::simultaneous_decision(4, rat(4)).unwrap()
    }

    #[test]
    fn diagonal_example() {
        let d = diagonal_equilibrium(&sd44());
        let den = &c(1) + &q().pow(4).scale(&rat(3));
        assert_eq!(d.f, r(&s() - &(&q() * &den), den.clone()));
        assert_eq!(d.g1, r(&q().pow(4).scale(&rat(4)) - &den, den.clone()));
        assert_eq!(d.g2, r(&(-&den) - &q().pow(4).scale(&rat(12)), den.clone()));
        let (num, dn, pos) = clear_denominators(&d.f);
        assert!(pos);
        assert_eq!(dn, den);
        assert_eq!(num, &(&s() - &q()) - &q().pow(5).scale(&rat(3)));
        let (num, _, _) = clear_denominators(&d.g1);
        assert_eq!(num, &q().pow(4) - &c(1));
    }

    #[test]
    fn nondiagonal_examples() {
        let m = sd44();
        let pp = &c(1) + &q().pow(4).scale(&rat(3));
        let pq = &(&c(1) + &p().pow(4)) + &q().pow(4).scale(&rat(2));
        let t = nondiagonal_equilibrium(&m, 1).unwrap();
        assert_eq!(t.f1, r(&s() - &(&p() * &pp), pp.clone()));
        assert_eq!(t.f2, r(&s() - &(&q() * &pq), pq.clone()));
        let g2 = r(&(&q().pow(3) * &p()).scale(&rat(4)) - &pp, pp.clone());
        assert_eq!(t.g2, g2);
        let g3 = r(&pq.scale(&rat(-2)) - &q().pow(4).scale(&rat(8)), pq.clone());
        assert_eq!(t.g3, g3);

        let t2 = nondiagonal_equilibrium(&m, 2).unwrap();
        let a = &(&c(1) + &p().pow(4)) + &q().pow(4).scale(&rat(2));
        let b = &(&c(1) + &p().pow(4).scale(&rat(2))) + &q().pow(4);
        let g3 = RatFunc::constant(rat(-2))
            .sub(&r(p().pow(4).scale(&rat(4)), a))
            .sub(&r(q().pow(4).scale(&rat(4)), b));
        assert_eq!(t2.g3, g3);
        assert!(matches!(
            nondiagonal_equilibrium(&m, 3),
            Err(MsrsError::BadMultiplicity { i: 3, max: 2 })
        ));
    }

    #[test]
    fn difference_example() {
        let t = nondiagonal_equilibrium(&sd44(), 1).unwrap();
        let d = difference_poly(&t.f1, &t.f2).unwrap();
        let pp = &c(1) + &q().pow(4).scale(&rat(3));
        let pq = &(&c(1) + &p().pow(4)) + &q().pow(4).scale(&rat(2));
        let expect = &(&(&s() * &(&p() + &q())) * &(&p().pow(2) + &q().pow(2))) - &(&pp * &pq);
        assert!(d == expect || d == -expect);
        assert!(difference_poly(&t.f1, &t.f1).unwrap().is_zero());
    }

    #[test]
    fn half_template_difference_is_antisymmetric() {
        let m = MsrsModel::bhlh(4, rat(2), ratio(1, 2)).unwrap();
        let t = nondiagonal_equilibrium(&m, 2).unwrap();
        let d = difference_poly(&t.f1, &t.f2).unwrap();
        let swapped = d.substitute(&[(Var::P, q()), (Var::Q, p())]);
        assert!(swapped == d || swapped == -d.clone());
    }

    fn models() -> Vec<MsrsModel> {
        vec![
            sd44(),
            MsrsModel::simultaneous_decision(5, ratio(7, 3)).unwrap(),
            MsrsModel::mutual_inhibition(4, rat(2), ratio(1, 3)).unwrap(),
            MsrsModel::bhlh(5, rat(3), ratio(1, 2)).unwrap(),
            MsrsModel::simultaneous_decision(2, rat(3)).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn templates_match_full_model(
            sn in 1i64..50, sd in 1i64..10, pn in 1i64..30, pd in 1i64..10,
            qn in 1i64..30, qd in 1i64..10, which in 0usize..5, i in 1u32..3,
        ) {
            let m = &models()[which];
            let i = i.min(m.n / 2);
            let (sv, pv, qv) = (ratio(sn, sd), ratio(pn, pd), ratio(qn, qd));
            let vals = [(Var::Sigma, sv.clone()), (Var::P, pv.clone()), (Var::Q, qv.clone())];
            let t = nondiagonal_equilibrium(m, i).unwrap();
            let mut pt: Vec<Rat> = vec![pv.clone(); i as usize];
            pt.extend(std::iter::repeat_n(qv.clone(), (m.n - i) as usize));
            prop_assert_eq!(t.f1.eval(&vals).unwrap(), m.f_at(&sv, &pt, 0));
            prop_assert_eq!(t.f2.eval(&vals).unwrap(), m.f_at(&sv, &pt, m.n as usize - 1));
            let diag = vec![qv.clone(); m.n as usize];
            prop_assert_eq!(diagonal_equilibrium(m).f.eval(&vals).unwrap(), m.f_at(&sv, &diag, 0));
            // at p = q both template functions collapse to the diagonal F
            let on = [(Var::Sigma, sv.clone()), (Var::P, qv.clone()), (Var::Q, qv.clone())];
            let fd = diagonal_equilibrium(m).f.eval(&on).unwrap();
            prop_assert_eq!(t.f1.eval(&on).unwrap(), fd.clone());
            prop_assert_eq!(t.f2.eval(&on).unwrap(), fd);
            let d = difference_poly(&t.f1, &t.f2).unwrap();
            let lhs = &(&p() - &q()) * &d;
            let rhs = &(t.f1.num() * t.f2.den()) - &(t.f2.num() * t.f1.den());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
