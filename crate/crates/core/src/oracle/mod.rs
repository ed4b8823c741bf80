//! Floating-point falsifier: multistart Newton on the full n-dimensional system,
//! Jacobian spectra, Routh–Hurwitz minors, and empirical checks of the
//! eigenstructure theorems. Nothing here is a proof.

use nalgebra::{Complex, DMatrix, DVector, Schur};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub mod kernels;

use crate::exact_core::{rat_to_f64, Rat, RatFunc, UPoly, Var};
use crate::interval::Dy;
use crate::model::MsrsModel;
use crate::reduction::{diagonal_equilibrium, nondiagonal_equilibrium};

pub const RESIDUAL_TOL: f64 = 1e-10;
pub const DEDUP_TOL: f64 = 1e-6;
pub const CLUSTER_TOL: f64 = 1e-6;
pub const EIGEN_TOL: f64 = 1e-8;

const MAX_ITER: usize = 200;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericEquilibrium {
    /// Original coordinates x.
    pub point: Vec<f64>,
    pub residual: f64,
    pub eigenvalues: Vec<Complex<f64>>,
    /// Characteristic polynomial b_0 λ^n + … + b_n with b_0 = 1.
    pub char_poly: Vec<f64>,
    pub hurwitz_minors: Vec<f64>,
    pub stable: bool,
    pub stable_hurwitz: bool,
    /// `(i, p, q)`: i coordinates equal p, the rest q; `None` with more than two clusters.
    pub template: Option<(u32, f64, f64)>,
}

/// f64 view of a model in stored coordinates z = x^(1/b).
struct NumModel {
    n: usize,
    b: i32,
    sigma: f64,
    l: Vec<f64>,
    g: Vec<f64>,
    h: Vec<f64>,
    a: Vec<f64>,
    psi: Vec<f64>,
}

fn coeffs(u: &UPoly) -> Vec<f64> {
    u.coeffs().iter().map(rat_to_f64).collect()
}

/// Value and derivative by Horner.
fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let (mut v, mut d) = (0.0, 0.0);
    for &k in c.iter().rev() {
        d = d * x + v;
        v = v * x + k;
    }
    (v, d)
}

impl NumModel {
    fn new(m: &MsrsModel, sigma: &Rat) -> Self {
        Self {
            n: m.n as usize,
            b: m.c_den as i32,
            sigma: rat_to_f64(sigma),
            l: coeffs(&m.l),
            g: coeffs(&m.g),
            h: coeffs(&m.h),
            a: coeffs(&m.a),
            psi: coeffs(&m.psi),
        }
    }

    fn z_of(&self, x: f64) -> f64 {
        x.powf(1.0 / self.b as f64)
    }

    fn x_of(&self, z: f64) -> f64 {
        z.powi(self.b)
    }

    /// F(z) and ∂F/∂z.
    fn eval(&self, z: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let n = self.n;
        let s: f64 = z.iter().map(|&zk| horner(&self.psi, zk).0).sum();
        let (a_s, ap_s) = horner(&self.a, s);
        let mut f = DVector::zeros(n);
        let mut j = DMatrix::zeros(n, n);
        let dpsi: Vec<f64> = z.iter().map(|&zk| horner(&self.psi, zk).1).collect();
        for k in 0..n {
            let (l, dl) = horner(&self.l, z[k]);
            let (g, dg) = horner(&self.g, z[k]);
            let (h, dh) = horner(&self.h, z[k]);
            let d = a_s + h;
            f[k] = -l + self.sigma * g / d;
            for m in 0..n {
                j[(k, m)] = -self.sigma * g * ap_s * dpsi[m] / (d * d);
            }
            j[(k, k)] += -dl + self.sigma * (dg * d - g * dh) / (d * d);
        }
        (f, j)
    }

    /// Jacobian with respect to the original coordinates.
    fn jacobian_x(&self, z: &[f64]) -> DMatrix<f64> {
        let (_, mut j) = self.eval(z);
        for (m, &zm) in z.iter().enumerate() {
            let dxdz = self.b as f64 * zm.powi(self.b - 1);
            for k in 0..self.n {
                j[(k, m)] /= dxdz;
            }
        }
        j
    }

    fn newton(&self, z0: &[f64]) -> Option<Vec<f64>> {
        let mut z = DVector::from_column_slice(z0);
        let (mut f, mut jac) = self.eval(z.as_slice());
        let mut norm = f.amax();
        for _ in 0..MAX_ITER {
            if !norm.is_finite() {
                return None;
            }
            let step = jac.clone().lu().solve(&(-&f))?;
            let mut lam = 1.0;
            loop {
                let trial = &z + &step * lam;
                if trial.iter().all(|&t| t > 0.0) {
                    let (ft, jt) = self.eval(trial.as_slice());
                    let nt = ft.amax();
                    if nt < norm || lam < 1e-3 {
                        z = trial;
                        f = ft;
                        jac = jt;
                        norm = nt;
                        break;
                    }
                }
                lam *= 0.5;
                if lam < 1e-6 {
                    return None;
                }
            }
            if (&step * lam).amax() <= 1e-15 * z.amax() {
                break;
            }
        }
        (norm <= RESIDUAL_TOL).then(|| z.as_slice().to_vec())
    }
}

/// Spectrum via a real Schur form. Clustered eigenvalues can stall deflation at
/// machine precision, so the tolerance is relaxed in steps; if nothing converges
/// the result is NaN, which every downstream check treats as a failure.
pub fn eigenvalues(j: &DMatrix<f64>) -> Vec<Complex<f64>> {
    for eps in [f64::EPSILON, 1e-14, 1e-13, 1e-12] {
        if let Some(s) = Schur::try_new(j.clone(), eps, 2_000) {
            return s.complex_eigenvalues().iter().copied().collect();
        }
    }
    vec![Complex::new(f64::NAN, f64::NAN); j.nrows()]
}

/// Coefficients 1, b_1, …, b_n of det(λI − J) by Faddeev–LeVerrier.
pub fn char_poly(j: &DMatrix<f64>) -> Vec<f64> {
    let n = j.nrows();
    let mut out = vec![1.0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    let mut c = 1.0;
    for k in 1..=n {
        m = j * &m + DMatrix::identity(n, n) * c;
        c = -(j * &m).trace() / k as f64;
        out.push(c);
    }
    out
}

/// Leading principal minors Δ_1..Δ_n of the Hurwitz matrix of b_0 λ^n + … + b_n.
pub fn hurwitz_minors(b: &[f64]) -> Vec<f64> {
    let n = b.len() - 1;
    let coef = |k: i64| {
        if k >= 0 && (k as usize) <= n {
            b[k as usize]
        } else {
            0.0
        }
    };
    let h = DMatrix::from_fn(n, n, |i, j| coef(2 * (j as i64 + 1) - (i as i64 + 1)));
    (1..=n).map(|k| h.view((0, 0), (k, k)).determinant()).collect()
}

/// Groups sorted values whose relative gap is at most `tol`; returns (value, size).
fn clusters(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = vec![];
    for x in v {
        match out.last_mut() {
            Some((c, k)) if (x - *c).abs() <= tol * x.abs().max(c.abs()) => *k += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

fn infer_template(x: &[f64]) -> Option<(u32, f64, f64)> {
    match clusters(x, CLUSTER_TOL).as_slice() {
        [(q, _)] => Some((0, *q, *q)),
        [(a, ka), (b, kb)] => Some(if ka <= kb {
            (*ka as u32, *a, *b)
        } else {
            (*kb as u32, *b, *a)
        }),
        _ => None,
    }
}

fn analyse(nm: &NumModel, z: &[f64]) -> NumericEquilibrium {
    let (f, _) = nm.eval(z);
    let j = nm.jacobian_x(z);
    let eigenvalues = eigenvalues(&j);
    let cp = char_poly(&j);
    let minors = hurwitz_minors(&cp);
    let point: Vec<f64> = z.iter().map(|&zk| nm.x_of(zk)).collect();
    NumericEquilibrium {
        template: infer_template(&point),
        residual: f.amax(),
        stable: eigenvalues.iter().all(|l| l.re < 0.0),
        stable_hurwitz: minors.iter().all(|&d| d > 0.0),
        eigenvalues,
        char_poly: cp,
        hurwitz_minors: minors,
        point,
    }
}

fn same_point(a: &[f64], b: &[f64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= DEDUP_TOL * x.abs().max(y.abs()))
}

/// Positive equilibria at σ = v found by damped Newton from `starts` points drawn
/// log-uniformly from (1e-3, 1e2)^n.
pub fn numeric_equilibria(m: &MsrsModel, v: &Rat, starts: usize, seed: u64) -> Vec<NumericEquilibrium> {
    let nm = NumModel::new(m, v);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (1e-3f64.ln(), 1e2f64.ln());
    let inits: Vec<Vec<f64>> = (0..starts)
        .map(|_| (0..nm.n).map(|_| nm.z_of(rng.gen_range(lo..hi).exp())).collect())
        .collect();
    let found: Vec<Vec<f64>> = inits.par_iter().filter_map(|z0| nm.newton(z0)).collect();
    dedup_and_analyse(&nm, found)
}

/// Newton from one given point in original coordinates.
pub fn newton_from(m: &MsrsModel, v: &Rat, x0: &[f64]) -> Option<NumericEquilibrium> {
    let nm = NumModel::new(m, v);
    let z0: Vec<f64> = x0.iter().map(|&x| nm.z_of(x)).collect();
    nm.newton(&z0).map(|z| analyse(&nm, &z))
}

fn dedup_and_analyse(nm: &NumModel, mut found: Vec<Vec<f64>>) -> Vec<NumericEquilibrium> {
    found.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<f64>> = vec![];
    for z in found {
        // positive equilibria only; Newton can creep toward the boundary
        if z.iter().any(|&t| nm.x_of(t) < 1e-8) {
            continue;
        }
        if !kept.iter().any(|k| same_point(k, &z)) {
            kept.push(z);
        }
    }
    kept.iter().map(|z| analyse(nm, z)).collect()
}

/// `(e, s)` as seen by the oracle.
pub fn oracle_counts(eqs: &[NumericEquilibrium]) -> (u64, u64) {
    (eqs.len() as u64, eqs.iter().filter(|e| e.stable).count() as u64)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TheoremReport {
    pub checked: usize,
    /// Inputs that are not equilibria (residual above tolerance).
    pub rejected: usize,
    pub violations: Vec<String>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, o: TheoremReport) {
        self.checked += o.checked;
        self.rejected += o.rejected;
        self.violations.extend(o.violations);
    }
}

fn exact_of(x: f64) -> Rat {
    Dy::from_f64(x).to_rat()
}

fn g_at(g: &RatFunc, v: &Rat, zp: f64, zq: f64) -> f64 {
    let vals = [(Var::Sigma, v.clone()), (Var::P, exact_of(zp)), (Var::Q, exact_of(zq))];
    g.eval(&vals).map(|r| rat_to_f64(&r)).unwrap_or(f64::NAN)
}

fn quadratic_roots(s: f64, p: f64) -> [Complex<f64>; 2] {
    let d = s * s - 4.0 * p;
    if d >= 0.0 {
        let r = d.sqrt();
        // avoid cancellation in the smaller root
        let big = if s >= 0.0 { (s + r) / 2.0 } else { (s - r) / 2.0 };
        let small = if big != 0.0 { p / big } else { 0.0 };
        [Complex::new(big, 0.0), Complex::new(small, 0.0)]
    } else {
        let r = (-d).sqrt() / 2.0;
        [Complex::new(s / 2.0, r), Complex::new(s / 2.0, -r)]
    }
}

/// Eigenvalues predicted by the closed-form G's at a template point.
pub fn predicted_eigenvalues(m: &MsrsModel, v: &Rat, template: (u32, f64, f64)) -> Vec<Complex<f64>> {
    let (i, p, q) = template;
    let b = m.c_den as f64;
    let (zp, zq) = (p.powf(1.0 / b), q.powf(1.0 / b));
    let n = m.n as usize;
    let real = |x: f64| Complex::new(x, 0.0);
    if i == 0 {
        let d = diagonal_equilibrium(m);
        let mut out = vec![real(g_at(&d.g1, v, zq, zq)); n - 1];
        out.push(real(g_at(&d.g2, v, zq, zq)));
        return out;
    }
    let r = nondiagonal_equilibrium(m, i).expect("template index in range");
    let i = i as usize;
    let mut out = vec![real(g_at(&r.g1, v, zp, zq)); n - i - 1];
    out.extend(vec![real(g_at(&r.g2, v, zp, zq)); i - 1]);
    out.extend(quadratic_roots(g_at(&r.g3, v, zp, zq), g_at(&r.g4, v, zp, zq)));
    out
}

fn sorted(mut v: Vec<Complex<f64>>) -> Vec<Complex<f64>> {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    v
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must count as a failure
fn check_one(m: &MsrsModel, v: &Rat, e: &NumericEquilibrium, rep: &mut TheoremReport) {
    if !(e.residual <= RESIDUAL_TOL) {
        rep.rejected += 1;
        return;
    }
    rep.checked += 1;
    let at = format!("{:?}", e.point);
    let im = e.eigenvalues.iter().map(|l| l.im.abs()).fold(0.0, f64::max);
    if im > EIGEN_TOL {
        rep.violations
            .push(format!("complex eigenvalue (|Im| = {im:e}) at {at}"));
    }
    let Some(t) = e.template else {
        rep.violations.push(format!("more than two coordinate values at {at}"));
        return;
    };
    let predicted = sorted(predicted_eigenvalues(m, v, t));
    let actual = sorted(e.eigenvalues.clone());
    let worst = predicted
        .iter()
        .zip(&actual)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    if !(worst <= EIGEN_TOL) {
        rep.violations.push(format!(
            "eigenvalues deviate from the template prediction by {worst:e} at {at}"
        ));
    }
    if e.stable != e.stable_hurwitz {
        rep.violations
            .push(format!("eigenvalue and Hurwitz stability disagree at {at}"));
    }
}

pub fn theorem_checks(m: &MsrsModel, v: &Rat, equilibria: &[NumericEquilibrium]) -> TheoremReport {
    let mut rep = TheoremReport::default();
    for e in equilibria {
        check_one(m, v, e, &mut rep);
    }
    rep
}

/// Analysis of an arbitrary point, equilibrium or not; used to feed the guard.
pub fn analyse_point(m: &MsrsModel, v: &Rat, x: &[f64]) -> NumericEquilibrium {
    let nm = NumModel::new(m, v);
    let z: Vec<f64> = x.iter().map(|&t| nm.z_of(t)).collect();
    analyse(&nm, &z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{rat, ratio};

    fn sd44() -> MsrsModel {
        MsrsModel::simultaneous_decision(4, rat(4)).unwrap()
    }

    #[test]
    fn hurwitz_of_known_polynomials() {
        // (λ+1)(λ+2)(λ+3)
        let m = hurwitz_minors(&[1.0, 6.0, 11.0, 6.0]);
        assert!(m.iter().all(|&d| d > 0.0));
        assert!((m[1] - 60.0).abs() < 1e-9);
        // (λ−1)(λ+2)
        assert!(hurwitz_minors(&[1.0, 1.0, -2.0]).iter().any(|&d| d <= 0.0));
    }

    #[test]
    fn char_poly_of_companion() {
        let j = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -6.0, -5.0]);
        let c = char_poly(&j);
        assert!((c[1] - 5.0).abs() < 1e-12 && (c[2] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn sd44_counts() {
        let m = sd44();
        assert_eq!(oracle_counts(&numeric_equilibria(&m, &rat(1), 1000, 7)), (1, 1));
        let eqs = numeric_equilibria(&m, &rat(2), 10_000, 7);
        assert_eq!(oracle_counts(&eqs), (9, 5));
        assert_eq!(eqs, numeric_equilibria(&m, &rat(2), 10_000, 7));
    }

    #[test]
    fn theorems_hold_at_sigma_5() {
        let m = sd44();
        let eqs = numeric_equilibria(&m, &rat(5), 10_000, 11);
        assert_eq!(eqs.len(), 15);
        let rep = theorem_checks(&m, &rat(5), &eqs);
        assert!(rep.passed(), "{:?}", rep.violations);
        assert_eq!(rep.checked, 15);
    }

    #[test]
    fn diagonal_spectrum() {
        let m = sd44();
        let eqs = numeric_equilibria(&m, &rat(2), 2000, 3);
        let d = eqs.iter().find(|e| e.template.map(|t| t.0) == Some(0)).unwrap();
        let ev = sorted(d.eigenvalues.clone());
        let pred = sorted(predicted_eigenvalues(&m, &rat(2), d.template.unwrap()));
        // G1 three times and G2 once
        let g1 = pred.iter().filter(|l| (*l - pred[3]).norm() < 1e-8).count();
        assert!(g1 == 3 || pred.iter().filter(|l| (*l - pred[0]).norm() < 1e-8).count() == 3);
        for (a, b) in ev.iter().zip(&pred) {
            assert!((a - b).norm() < 1e-8);
        }
    }

    #[test]
    fn fixed_point_is_returned() {
        let m = sd44();
        let eqs = numeric_equilibria(&m, &rat(2), 2000, 3);
        for e in &eqs {
            let again = newton_from(&m, &rat(2), &e.point).unwrap();
            assert!(same_point(&again.point, &e.point));
        }
    }

    #[test]
    fn non_equilibrium_is_rejected() {
        let m = sd44();
        let e = analyse_point(&m, &rat(2), &[0.3, 0.7, 1.1, 2.0]);
        let rep = theorem_checks(&m, &rat(2), &[e]);
        assert_eq!((rep.checked, rep.rejected), (0, 1));
    }

    #[test]
    fn other_families() {
        let mi = MsrsModel::mutual_inhibition(3, rat(2), rat(1)).unwrap();
        let bh = MsrsModel::bhlh(3, ratio(1, 10), rat(1)).unwrap();
        for (m, v) in [(mi, rat(4)), (bh, rat(3))] {
            let eqs = numeric_equilibria(&m, &v, 3000, 5);
            assert!(!eqs.is_empty());
            let rep = theorem_checks(&m, &v, &eqs);
            assert!(rep.passed(), "{}: {:?}", m.label, rep.violations);
        }
    }
}
