//! Equilibrium counting at a fixed rational σ.
//!
//! Diagonal solutions are roots of a univariate polynomial and are handled with
//! exact isolation. Two-value templates are solved on the grid spanned by the
//! positive roots of the two resultants Res_p(A, Δ) and Res_q(A, Δ): every
//! solution has its coordinates among those roots, so each grid cell holds at most
//! one candidate and is either excluded by interval evaluation or certified by the
//! Krawczyk operator. Stability signs are then decided on the certified boxes.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::elimination::{template_systems, used_gs, TemplateSystem};
use crate::error::{MsrsError, Result};
use crate::exact_core::{fmt_rat, IntPoly, MPoly, Rat, RatFunc, Var};
use crate::interval::{Dy, IPoly, Iv};
use crate::model::MsrsModel;
use crate::modular::Dense2;
use crate::realroots::{isolate_positive_int, refine_root_int, IsolatingInterval};
use crate::reduction::{clear_denominators, diagonal_equilibrium};

/// Contraction steps per sign query.
pub const SIGN_DEPTH: usize = 64;
/// Bisection depth per grid cell.
pub const SUBDIVISION_DEPTH: usize = 80;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of(s: i32) -> Self {
        match s.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    fn times(self, o: Sign) -> Sign {
        Sign::of(self.as_i32() * o.as_i32())
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxStatus {
    CertifiedUnique,
    Excluded,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedBox {
    pub p: Iv,
    pub q: Iv,
    pub status: BoxStatus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TemplateCount {
    /// 0 for the diagonal template.
    pub i: u32,
    pub e_raw: u64,
    pub s_raw: u64,
}

/// The diagonal template in (σ, q).
#[derive(Clone, Debug)]
pub struct DiagonalSystem {
    pub f_num: MPoly,
    pub f_den: MPoly,
    pub den_positive: bool,
    pub g_num: [MPoly; 2],
    pub g_den: [MPoly; 2],
}

impl DiagonalSystem {
    pub fn new(m: &MsrsModel) -> Self {
        let d = diagonal_equilibrium(m);
        let (f_num, f_den, den_positive) = clear_denominators(&d.f);
        Self {
            f_num,
            f_den,
            den_positive,
            g_num: [d.g1.num().clone(), d.g2.num().clone()],
            g_den: [d.g1.den().clone(), d.g2.den().clone()],
        }
    }
}

/// Polynomial data for all templates of one model, reusable across sample points.
#[derive(Clone, Debug)]
pub struct CountingContext {
    pub n: u32,
    pub diagonal: DiagonalSystem,
    pub systems: Vec<TemplateSystem>,
}

impl CountingContext {
    pub fn new(m: &MsrsModel) -> Result<Self> {
        Ok(Self::from_systems(m, template_systems(m)?))
    }

    pub fn from_systems(m: &MsrsModel, systems: Vec<TemplateSystem>) -> Self {
        Self {
            n: m.n,
            diagonal: DiagonalSystem::new(m),
            systems,
        }
    }

    /// Raw per-template counts at σ = v, diagonal first.
    pub fn template_counts(&self, v: &Rat) -> Result<Vec<TemplateCount>> {
        let diag = count_diagonal_system(&self.diagonal, v)?;
        let rest: Result<Vec<TemplateCount>> = self.systems.par_iter().map(|s| count_template(self.n, s, v)).collect();
        let mut out = vec![diag];
        out.extend(rest?);
        Ok(out)
    }

    /// `(e, s)` at σ = v.
    pub fn count(&self, v: &Rat) -> Result<(u64, u64)> {
        aggregate(self.n, &self.template_counts(v)?)
    }
}

/// Weighted sum over templates: C(n, i) per template, halved for i = n/2.
pub fn aggregate(n: u32, counts: &[TemplateCount]) -> Result<(u64, u64)> {
    let (mut e, mut s) = (0u64, 0u64);
    for c in counts {
        if c.i == 0 {
            e += c.e_raw;
            s += c.s_raw;
            continue;
        }
        let w = binomial(n, c.i);
        if 2 * c.i == n {
            assert!(
                c.e_raw % 2 == 0 && c.s_raw % 2 == 0,
                "template {} counts ({}, {}) must be even by p/q symmetry",
                c.i,
                c.e_raw,
                c.s_raw
            );
            e += c.e_raw / 2 * w;
            s += c.s_raw / 2 * w;
        } else {
            e += c.e_raw * w;
            s += c.s_raw * w;
        }
    }
    Ok((e, s))
}

pub fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k) as u64;
    (0..k).fold(1u64, |acc, j| acc * (n as u64 - j) / (j + 1))
}

pub fn equilibrium_counting(m: &MsrsModel, v: &Rat) -> Result<(u64, u64)> {
    CountingContext::new(m)?.count(v)
}

pub fn count_diagonal(m: &MsrsModel, v: &Rat) -> Result<TemplateCount> {
    count_diagonal_system(&DiagonalSystem::new(m), v)
}

fn undecidable(v: &Rat) -> MsrsError {
    MsrsError::Undecidable { at: fmt_rat(v) }
}

/// Univariate integer polynomial in q of `f(σ = v, q)`, scaled by a positive constant.
fn int_at(f: &MPoly, v: &Rat) -> IntPoly {
    let fixed = f.eval_partial(&[(Var::Sigma, v.clone())]);
    IPoly::from_mpoly(&fixed, &[Var::Q]).to_intpoly()
}

fn squarefree_positive_part(f: &IntPoly) -> IntPoly {
    f.primitive().strip_x().0.squarefree()
}

fn univariate_of(g: &MPoly) -> IntPoly {
    let v = g.vars().first().copied().unwrap_or(Var::Q);
    IPoly::from_mpoly(g, &[v]).to_intpoly()
}

/// Sign of a univariate polynomial `g` at the root of the squarefree `f` in `iv`,
/// refining `iv` in place. `None` when the depth limit is reached.
fn poly_sign_at_root(g: &IntPoly, f: &IntPoly, iv: &mut IsolatingInterval) -> Option<Sign> {
    if iv.exact {
        return Some(Sign::of(g.sign_at(&iv.lo)));
    }
    if g.is_zero() {
        return Some(Sign::Zero);
    }
    let d = f.gcd(g);
    if d.deg() >= 1 && d.sign_at(&iv.lo) * d.sign_at(&iv.hi) < 0 {
        return Some(Sign::Zero);
    }
    let gi = IPoly::univariate(g, Var::Q);
    for _ in 0..SIGN_DEPTH {
        let x = Iv::from_rats(&iv.lo, &iv.hi, 128);
        if let Some(s) = gi.eval_box(&[x]).sign() {
            if s != 0 {
                return Some(Sign::of(s));
            }
        }
        let w = iv.width() / Rat::from_integer(2.into());
        *iv = refine_root_int(f, iv, &w);
        if iv.exact {
            return Some(Sign::of(g.sign_at(&iv.lo)));
        }
    }
    None
}

/// Exact sign of the univariate rational function `g` at the root of the squarefree
/// polynomial `f` isolated by `iv`.
pub fn sign_at_root(g: &RatFunc, f: &IntPoly, iv: &IsolatingInterval) -> Result<Sign> {
    let at = format!("root in [{}, {}]", fmt_rat(&iv.lo), fmt_rat(&iv.hi));
    let err = || MsrsError::Undecidable { at: at.clone() };
    let mut iv = iv.clone();
    let sn = poly_sign_at_root(&univariate_of(g.num()), f, &mut iv.clone()).ok_or_else(err)?;
    let sd = poly_sign_at_root(&univariate_of(g.den()), f, &mut iv).ok_or_else(err)?;
    if sd == Sign::Zero {
        return Err(MsrsError::DivisionByZeroFunction);
    }
    Ok(sn.times(sd))
}

fn count_diagonal_system(ds: &DiagonalSystem, v: &Rat) -> Result<TemplateCount> {
    let fv = int_at(&ds.f_num, v);
    if fv.is_zero() {
        return Err(MsrsError::InfiniteSolutions {
            template: 0,
            at: fmt_rat(v),
        });
    }
    let f = squarefree_positive_part(&fv);
    let (mut e, mut s) = (0, 0);
    let den = int_at(&ds.f_den, v);
    let gn: Vec<IntPoly> = ds.g_num.iter().map(|g| int_at(g, v)).collect();
    let gd: Vec<IntPoly> = ds.g_den.iter().map(|g| int_at(g, v)).collect();
    for mut iv in isolate_positive_int(&f) {
        if !ds.den_positive {
            let sd = poly_sign_at_root(&den, &f, &mut iv).ok_or_else(|| undecidable(v))?;
            if sd == Sign::Zero {
                continue;
            }
        }
        e += 1;
        let mut stable = true;
        for k in 0..2 {
            let sn = poly_sign_at_root(&gn[k], &f, &mut iv).ok_or_else(|| undecidable(v))?;
            let sd = poly_sign_at_root(&gd[k], &f, &mut iv).ok_or_else(|| undecidable(v))?;
            if sd == Sign::Zero {
                return Err(undecidable(v));
            }
            stable &= sn.times(sd) == Sign::Negative;
        }
        if stable {
            s += 1;
        }
    }
    Ok(TemplateCount {
        i: 0,
        e_raw: e,
        s_raw: s,
    })
}

/// `d(σ = v, y)` for a dense `[y][σ]` array.
fn dense2_at(d: &Dense2, v: &Rat) -> IntPoly {
    let coeffs: Vec<Rat> = d
        .iter()
        .map(|row| {
            row.iter()
                .rev()
                .fold(Rat::zero(), |acc, c| acc * v + Rat::from_integer(c.clone()))
        })
        .collect();
    IntPoly::from_rats(&coeffs)
}

/// Square polynomial system in one or two unknowns, optionally with σ left as an
/// interval parameter (passed as the last evaluation argument).
pub(crate) struct PolySystem {
    f: Vec<IPoly>,
    jac: Vec<Vec<IPoly>>,
    sigma: Option<Iv>,
}

pub(crate) enum Kraw {
    /// Unique solution in the box (for every σ in the parameter interval),
    /// enclosed by the returned box.
    Inside(Vec<Iv>),
    Disjoint,
    /// Inconclusive; carries K(X) when it could be formed.
    Unknown(Option<Vec<Iv>>),
}

impl PolySystem {
    pub(crate) fn new(eqs: &[&MPoly], vars: &[Var], sigma: Option<Iv>) -> Self {
        let mut all = vars.to_vec();
        if sigma.is_some() {
            all.push(Var::Sigma);
        }
        let f: Vec<IPoly> = eqs.iter().map(|e| IPoly::from_mpoly(e, &all)).collect();
        let jac = f
            .iter()
            .map(|g| (0..vars.len()).map(|k| g.derivative(k)).collect())
            .collect();
        Self { f, jac, sigma }
    }

    pub(crate) fn at_point(a: &MPoly, d: &MPoly) -> Self {
        Self::new(&[a, d], &[Var::P, Var::Q], None)
    }

    fn dim(&self) -> usize {
        self.f.len()
    }

    pub(crate) fn args(&self, x: &[Iv]) -> Vec<Iv> {
        let mut v = x.to_vec();
        if let Some(s) = &self.sigma {
            v.push(s.clone());
        }
        v
    }

    pub(crate) fn excludes(&self, x: &[Iv]) -> bool {
        let a = self.args(x);
        self.f.iter().any(|f| !f.eval_box(&a).contains_zero())
    }

    /// Approximate inverse of the Jacobian at the box midpoint, as exact dyadics.
    fn preconditioner(&self, m: &[Iv]) -> Option<Vec<Vec<Dy>>> {
        let n = self.dim();
        let a = self.args(m);
        let j: Vec<Vec<Dy>> = self
            .jac
            .iter()
            .map(|row| row.iter().map(|g| g.eval_box(&a).mid()).collect())
            .collect();
        // Row scaling keeps the f64 image in range for huge coefficients.
        let mut shift = vec![0i64; n];
        let mut jf = vec![vec![0f64; n]; n];
        for r in 0..n {
            let top = j[r].iter().filter(|x| !x.is_zero()).map(|x| x.log2()).max()?;
            shift[r] = top;
            for c in 0..n {
                jf[r][c] = j[r][c].mul_pow2(-top).to_f64();
            }
        }
        let inv = if n == 1 {
            vec![vec![1.0 / jf[0][0]]]
        } else {
            let det = jf[0][0] * jf[1][1] - jf[0][1] * jf[1][0];
            if det.abs() < 1e-14 {
                return None;
            }
            vec![
                vec![jf[1][1] / det, -jf[0][1] / det],
                vec![-jf[1][0] / det, jf[0][0] / det],
            ]
        };
        if inv.iter().flatten().any(|x| !x.is_finite()) {
            return None;
        }
        Some(
            (0..n)
                .map(|r| (0..n).map(|c| Dy::from_f64(inv[r][c]).mul_pow2(-shift[c])).collect())
                .collect(),
        )
    }

    /// K(X) = m − Y f(m) + (I − Y J(X))(X − m).
    pub(crate) fn krawczyk(&self, x: &[Iv]) -> Kraw {
        let n = self.dim();
        let mb: Vec<Iv> = x.iter().map(|i| Iv::point(i.mid())).collect();
        let Some(y) = self.preconditioner(&mb) else {
            return Kraw::Unknown(None);
        };
        let am = self.args(&mb);
        let fm: Vec<Iv> = self.f.iter().map(|f| f.eval_box(&am)).collect();
        let ax = self.args(x);
        let jx: Vec<Vec<Iv>> = self
            .jac
            .iter()
            .map(|row| row.iter().map(|g| g.eval_box(&ax)).collect())
            .collect();
        let w = x
            .iter()
            .map(|i| i.width())
            .filter(|w| !w.is_zero())
            .map(|w| w.log2())
            .min()
            .unwrap_or(-200);
        let grid = w - 80;
        let dx: Vec<Iv> = (0..n).map(|k| x[k].sub(&mb[k])).collect();
        let mut k = Vec::with_capacity(n);
        for r in 0..n {
            let mut acc = mb[r].clone();
            for j in 0..n {
                acc = acc.sub(&fm[j].scale(&y[r][j]));
            }
            for c in 0..n {
                let mut m_rc = Iv::point(if r == c { Dy::int(1) } else { Dy::zero() });
                for j in 0..n {
                    m_rc = m_rc.sub(&jx[j][c].scale(&y[r][j]));
                }
                acc = acc.add(&m_rc.mul(&dx[c]));
            }
            k.push(acc.round_abs(grid));
        }
        if (0..n).any(|r| k[r].disjoint(&x[r])) {
            return Kraw::Disjoint;
        }
        if (0..n).all(|r| k[r].interior_of(&x[r])) {
            return Kraw::Inside(k);
        }
        Kraw::Unknown(Some(k))
    }

    /// Sign of `g` at the unique solution in the certified box `x`, contracting `x`.
    pub(crate) fn sign_on(&self, g: &IPoly, x: &mut Vec<Iv>) -> Option<Sign> {
        for _ in 0..SIGN_DEPTH {
            if let Some(s) = g.eval_box(&self.args(x)).sign() {
                if s != 0 {
                    return Some(Sign::of(s));
                }
            }
            self.contract(x)?;
        }
        None
    }

    /// One Krawczyk step on a certified box.
    pub(crate) fn contract(&self, x: &mut Vec<Iv>) -> Option<()> {
        match self.krawczyk(x) {
            Kraw::Inside(k) => {
                *x = k;
                Some(())
            }
            _ => None,
        }
    }
}

/// One coordinate of the grid: a root of a squarefree integer polynomial.
struct Coord<'a> {
    f: &'a IntPoly,
    iv: Iv,
    exact: Option<Rat>,
    slo: i32,
}

fn log2_floor(r: &Rat) -> i64 {
    r.numer().bits() as i64 - r.denom().bits() as i64 - 1
}

impl<'a> Coord<'a> {
    fn new(f: &'a IntPoly, ivs: &[IsolatingInterval], j: usize) -> Self {
        let it = &ivs[j];
        if it.exact {
            let a = it.lo.clone();
            let mut gap = a.clone();
            if j > 0 {
                gap = gap.min(&a - &ivs[j - 1].hi);
            }
            if j + 1 < ivs.len() {
                gap = gap.min(&ivs[j + 1].lo - &a);
            }
            gap = gap.min(Rat::one());
            let mut c = Self {
                f,
                iv: Iv::point(Dy::zero()),
                exact: Some(a),
                slo: 0,
            };
            c.center(log2_floor(&gap) - 2);
            return c;
        }
        let iv = match (Dy::exact_rat(&it.lo), Dy::exact_rat(&it.hi)) {
            (Some(lo), Some(hi)) => Iv::new(lo, hi),
            _ => Iv::from_rats(&it.lo, &it.hi, 256),
        };
        let slo = f.sign_at(&iv.lo.to_rat());
        debug_assert!(slo != 0 && slo * f.sign_at(&iv.hi.to_rat()) < 0);
        Self {
            f,
            iv,
            exact: None,
            slo,
        }
    }

    /// Interval of half-width about 2^k around the exact root.
    fn center(&mut self, k: i64) {
        let a = self.exact.as_ref().unwrap();
        let h = if k >= 0 {
            Rat::from_integer(BigInt::one() << k as usize)
        } else {
            Rat::new(BigInt::one(), BigInt::one() << (-k) as usize)
        };
        self.iv = Iv::new(Dy::floor_rat_exp(&(a - &h), k - 4), Dy::ceil_rat_exp(&(a + &h), k - 4));
    }

    fn refine(&mut self) {
        let k = self.iv.width().log2() - 2;
        if self.exact.is_some() {
            self.center(k);
            return;
        }
        let m = self.iv.mid();
        let mr = m.to_rat();
        let sm = self.f.sign_at(&mr);
        if sm == 0 {
            self.exact = Some(mr);
            self.center(k);
        } else if sm == self.slo {
            self.iv.lo = m;
        } else {
            self.iv.hi = m;
        }
    }
}

/// Certified solution boxes of `sys` on the grid of positive roots of `rp` (p) and `rq` (q).
fn solve_grid(sys: &PolySystem, rp: &IntPoly, rq: &IntPoly) -> Option<Vec<Vec<Iv>>> {
    let rp = squarefree_positive_part(rp);
    let rq = squarefree_positive_part(rq);
    let ip = isolate_positive_int(&rp);
    let iq = isolate_positive_int(&rq);
    let mut cps: Vec<Coord> = (0..ip.len()).map(|j| Coord::new(&rp, &ip, j)).collect();
    let mut cqs: Vec<Coord> = (0..iq.len()).map(|j| Coord::new(&rq, &iq, j)).collect();
    let mut sols = vec![];
    for a in 0..cps.len() {
        for b in 0..cqs.len() {
            let mut depth = 0;
            loop {
                let x = vec![cps[a].iv.clone(), cqs[b].iv.clone()];
                if sys.excludes(&x) {
                    break;
                }
                match sys.krawczyk(&x) {
                    Kraw::Inside(_) => {
                        sols.push(x);
                        break;
                    }
                    Kraw::Disjoint => break,
                    Kraw::Unknown(_) => {}
                }
                depth += 1;
                if depth > SUBDIVISION_DEPTH {
                    return None;
                }
                cps[a].refine();
                cqs[b].refine();
            }
        }
    }
    Some(sols)
}

/// All positive solutions of A = Δ = 0 at σ = v as certified boxes.
pub fn solve_bivariate(a: &MPoly, delta: &MPoly, v: &Rat) -> Result<Vec<CertifiedBox>> {
    let av = a.eval_partial(&[(Var::Sigma, v.clone())]);
    let dv = delta.eval_partial(&[(Var::Sigma, v.clone())]);
    let rq = crate::exact_core::resultant(&av, &dv, Var::P);
    let rp = crate::exact_core::resultant(&av, &dv, Var::Q);
    let sys = PolySystem::at_point(&av, &dv);
    let to_int = |r: &MPoly, var| IPoly::from_mpoly(r, &[var]).to_intpoly();
    let (rp, rq) = (to_int(&rp, Var::P), to_int(&rq, Var::Q));
    solve_certified(&sys, &rp, &rq, 0, v)
}

fn solve_certified(sys: &PolySystem, rp: &IntPoly, rq: &IntPoly, template: u32, v: &Rat) -> Result<Vec<CertifiedBox>> {
    if rp.is_zero() || rq.is_zero() {
        return Err(MsrsError::InfiniteSolutions {
            template,
            at: fmt_rat(v),
        });
    }
    let degenerate = || MsrsError::DegenerateSolution {
        template,
        at: fmt_rat(v),
    };
    let sols = solve_grid(sys, rp, rq).ok_or_else(degenerate)?;
    let mut out = vec![];
    for mut x in sols {
        // Δ removes the diagonal component, so p ≠ q at every solution.
        let mut steps = 0;
        while !x[0].disjoint(&x[1]) {
            steps += 1;
            if steps > SIGN_DEPTH || sys.contract(&mut x).is_none() {
                return Err(degenerate());
            }
        }
        out.push(CertifiedBox {
            p: x[0].clone(),
            q: x[1].clone(),
            status: BoxStatus::CertifiedUnique,
        });
    }
    Ok(out)
}

/// Corollary 1 stability from the signs of the used G's, in G1..G4 order.
pub fn stable_by_signs(used: &[usize], signs: &[Sign]) -> bool {
    used.iter().zip(signs).all(|(&k, &s)| {
        if k == 3 {
            s == Sign::Positive
        } else {
            s == Sign::Negative
        }
    })
}

struct PreparedTemplate {
    sys: PolySystem,
    used: Vec<usize>,
    g_num: Vec<IPoly>,
    g_den: Vec<Option<IPoly>>,
    f_den: Vec<IPoly>,
}

impl PreparedTemplate {
    fn new(n: u32, ts: &TemplateSystem, fix: impl Fn(&MPoly) -> MPoly, vars: &[Var], sys: PolySystem) -> Self {
        let used = used_gs(n, ts.i);
        let ip = |f: &MPoly| IPoly::from_mpoly(&fix(f), vars);
        let g_num = used.iter().map(|&k| ip(&ts.g_num[k])).collect();
        let g_den = used
            .iter()
            .map(|&k| (!ts.g_den[k].positive_on_orthant()).then(|| ip(&ts.g_den[k])))
            .collect();
        let f_den = [ts.reduced.f1.den(), ts.reduced.f2.den()]
            .into_iter()
            .filter(|d| !d.positive_on_orthant())
            .map(ip)
            .collect();
        Self {
            sys,
            used,
            g_num,
            g_den,
            f_den,
        }
    }

    /// Whether the solution is an equilibrium, and if so whether it is stable.
    fn classify(&self, x: &mut Vec<Iv>) -> Option<(bool, bool)> {
        for d in &self.f_den {
            if self.sys.sign_on(d, x)? == Sign::Zero {
                return Some((false, false));
            }
        }
        let mut signs = vec![];
        for (gn, gd) in self.g_num.iter().zip(&self.g_den) {
            let sn = self.sys.sign_on(gn, x)?;
            let sd = match gd {
                Some(d) => self.sys.sign_on(d, x)?,
                None => Sign::Positive,
            };
            signs.push(sn.times(sd));
        }
        Some((true, stable_by_signs(&self.used, &signs)))
    }
}

fn count_template(n: u32, ts: &TemplateSystem, v: &Rat) -> Result<TemplateCount> {
    let fix = |f: &MPoly| f.eval_partial(&[(Var::Sigma, v.clone())]);
    let sys = PolySystem::at_point(&fix(&ts.a1), &fix(&ts.delta));
    let prep = PreparedTemplate::new(n, ts, fix, &[Var::P, Var::Q], sys);
    let rp = dense2_at(&ts.rp, v);
    let rq = dense2_at(&ts.rq, v);
    let boxes = solve_certified(&prep.sys, &rp, &rq, ts.i, v)?;
    let (mut e, mut s) = (0, 0);
    for b in boxes {
        let mut x = vec![b.p, b.q];
        let (eq, st) = prep.classify(&mut x).ok_or_else(|| undecidable(v))?;
        e += eq as u64;
        s += st as u64;
    }
    Ok(TemplateCount {
        i: ts.i,
        e_raw: e,
        s_raw: s,
    })
}

/// Piece budget for the completeness subdivision over a σ-interval.
const PIECE_BUDGET: usize = 20_000;

/// Coefficient ranges over σ ∈ s for a dense `[y][σ]` array; `None` marks rows
/// that vanish identically.
fn rows_over(d: &Dense2, s: &Iv) -> Vec<Option<Iv>> {
    d.iter()
        .map(|row| {
            let r = IntPoly::new(row.clone());
            (!r.is_zero()).then(|| IPoly::univariate(&r, Var::Sigma).eval_box(std::slice::from_ref(s)))
        })
        .collect()
}

fn magnitude(i: &Iv) -> Dy {
    i.lo.abs().max(i.hi.abs())
}

/// Power-of-two bounds `[2^-k0, 2^k]` on the positive roots of a polynomial with
/// interval coefficients. Outer `None`: leading or trailing coefficient may vanish.
/// Inner `None`: no positive roots at all.
fn positive_root_range(c: &[Option<Iv>]) -> Option<Option<Iv>> {
    let idx: Vec<usize> = (0..c.len()).filter(|&j| c[j].is_some()).collect();
    let (Some(&lo), Some(&hi)) = (idx.first(), idx.last()) else {
        return None;
    };
    if lo == hi {
        return Some(None);
    }
    let get = |j: usize| c[j].as_ref().unwrap();
    if get(hi).contains_zero() || get(lo).contains_zero() {
        return None;
    }
    let min_abs = |i: &Iv| i.lo.abs().min(i.hi.abs());
    let exponent = |lead: &Iv, rest: &mut dyn Iterator<Item = usize>| {
        let l = min_abs(lead).log2();
        let m = rest
            .filter_map(|j| c[j].as_ref())
            .map(magnitude)
            .filter(|x| !x.is_zero())
            .map(|x| x.log2())
            .max();
        m.map_or(1, |m| (m - l + 1).max(0) + 1)
    };
    let k = exponent(get(hi), &mut (lo..hi));
    let k0 = exponent(get(lo), &mut (lo + 1..=hi));
    Some(Some(Iv::new(Dy::int(1).mul_pow2(-k0), Dy::int(1).mul_pow2(k))))
}

/// Whether every point of `region` lies in a certified box or is excluded for all σ.
fn covered(sys: &PolySystem, region: Vec<Iv>, boxes: &[Vec<Iv>]) -> bool {
    let mut stack = vec![(region, 0usize)];
    let mut budget = PIECE_BUDGET;
    while let Some((x, depth)) = stack.pop() {
        let inside = boxes
            .iter()
            .any(|b| x.iter().zip(b).all(|(xi, bi)| bi.lo <= xi.lo && xi.hi <= bi.hi));
        if inside || sys.excludes(&x) {
            continue;
        }
        if budget == 0 || depth >= SUBDIVISION_DEPTH {
            return false;
        }
        budget -= 1;
        let k = (0..x.len()).max_by_key(|&k| x[k].width()).unwrap();
        let (l, r) = x[k].split();
        let mut xl = x.clone();
        xl[k] = l;
        let mut xr = x;
        xr[k] = r;
        stack.push((xl, depth + 1));
        stack.push((xr, depth + 1));
    }
    true
}

/// Grows a box certified at one σ into a box certified for the whole σ-interval of
/// `sys`, by contraction followed by ε-inflation.
fn continue_box(at: &PolySystem, sys: &PolySystem, x0: &[Iv]) -> Option<Vec<Iv>> {
    let mut x = x0.to_vec();
    let target = sys.sigma.as_ref().map(|s| s.width()).unwrap_or_else(Dy::zero);
    for _ in 0..SIGN_DEPTH {
        if x.iter().all(|i| i.width() <= target) || at.contract(&mut x).is_none() {
            break;
        }
    }
    for _ in 0..24 {
        let grown = match sys.krawczyk(&x) {
            Kraw::Inside(_) => return Some(x),
            Kraw::Disjoint => return None,
            Kraw::Unknown(k) => k.unwrap_or_else(|| x.clone()),
        };
        // ε-inflation of the hull of X and K(X)
        x = x
            .iter()
            .zip(&grown)
            .map(|(i, k)| {
                let h = i.hull(k);
                let w = h.width().mul_pow2(-3);
                Iv::new(h.lo.sub(&w).max(i.lo.half()), h.hi.add(&w))
            })
            .collect();
    }
    None
}

fn pairwise_disjoint(boxes: &[Vec<Iv>]) -> bool {
    (0..boxes.len()).all(|a| (a + 1..boxes.len()).all(|b| boxes[a].iter().zip(&boxes[b]).any(|(x, y)| x.disjoint(y))))
}

impl CountingContext {
    /// `(e, s)` valid for every σ in `sigma`, or `None` when that cannot be certified.
    pub fn count_over(&self, sigma: &Iv) -> Option<(u64, u64)> {
        let mut counts = vec![self.diagonal_over(sigma)?];
        for ts in &self.systems {
            counts.push(template_over(self.n, ts, sigma)?);
        }
        aggregate(self.n, &counts).ok()
    }

    fn diagonal_over(&self, sigma: &Iv) -> Option<TemplateCount> {
        let ds = &self.diagonal;
        let vars = [Var::Q, Var::Sigma];
        let f = IPoly::from_mpoly(&ds.f_num.strip_monomial(), &vars).to_mpoly();
        let sys = PolySystem::new(&[&f], &[Var::Q], Some(sigma.clone()));
        let s0 = sigma.mid().to_rat();
        let f_s0 = f.eval_partial(&[(Var::Sigma, s0.clone())]);
        let at = PolySystem::new(&[&f_s0], &[Var::Q], None);
        let f0 = squarefree_positive_part(&int_at(&f, &s0));
        let ivs = isolate_positive_int(&f0);
        let mut boxes = vec![];
        for j in 0..ivs.len() {
            let mut c = Coord::new(&f0, &ivs, j);
            let mut found = None;
            for _ in 0..SUBDIVISION_DEPTH {
                if let Kraw::Inside(_) = at.krawczyk(&[c.iv.clone()]) {
                    found = Some(vec![c.iv.clone()]);
                    break;
                }
                c.refine();
            }
            boxes.push(continue_box(&at, &sys, &found?)?);
        }
        if !pairwise_disjoint(&boxes) {
            return None;
        }
        let coeffs: Vec<Option<Iv>> = f
            .coeffs(Var::Q)
            .iter()
            .map(|c| (!c.is_zero()).then(|| IPoly::from_mpoly(c, &[Var::Sigma]).eval_box(std::slice::from_ref(sigma))))
            .collect();
        if let Some(region) = positive_root_range(&coeffs)? {
            if !covered(&sys, vec![region], &boxes) {
                return None;
            }
        }
        let ip = |g: &MPoly| IPoly::from_mpoly(g, &vars);
        let (mut e, mut s) = (0, 0);
        for mut x in boxes {
            if !ds.den_positive && sys.sign_on(&ip(&ds.f_den), &mut x)? == Sign::Zero {
                continue;
            }
            e += 1;
            let mut stable = true;
            for k in 0..2 {
                let sn = sys.sign_on(&ip(&ds.g_num[k]), &mut x)?;
                let sd = sys.sign_on(&ip(&ds.g_den[k]), &mut x)?;
                stable &= sn.times(sd) == Sign::Negative;
            }
            s += stable as u64;
        }
        Some(TemplateCount {
            i: 0,
            e_raw: e,
            s_raw: s,
        })
    }
}

fn template_over(n: u32, ts: &TemplateSystem, sigma: &Iv) -> Option<TemplateCount> {
    let s0 = sigma.mid().to_rat();
    let fix = |f: &MPoly| f.eval_partial(&[(Var::Sigma, s0.clone())]);
    let at = PolySystem::at_point(&fix(&ts.a1), &fix(&ts.delta));
    let rp = dense2_at(&ts.rp, &s0);
    let rq = dense2_at(&ts.rq, &s0);
    if rp.is_zero() || rq.is_zero() {
        return None;
    }
    let sys = PolySystem::new(&[&ts.a1, &ts.delta], &[Var::P, Var::Q], Some(sigma.clone()));
    let boxes: Vec<Vec<Iv>> = solve_grid(&at, &rp, &rq)?
        .iter()
        .map(|b| continue_box(&at, &sys, b))
        .collect::<Option<_>>()?;
    if !pairwise_disjoint(&boxes) || boxes.iter().any(|b| !b[0].disjoint(&b[1])) {
        return None;
    }
    let pr = positive_root_range(&rows_over(&ts.rp, sigma))?;
    let qr = positive_root_range(&rows_over(&ts.rq, sigma))?;
    if let (Some(pr), Some(qr)) = (pr, qr) {
        if !covered(&sys, vec![pr, qr], &boxes) {
            return None;
        }
    }
    let prep = PreparedTemplate::new(n, ts, |f| f.clone(), &[Var::P, Var::Q, Var::Sigma], sys);
    let (mut e, mut s) = (0, 0);
    for mut x in boxes {
        let (eq, st) = prep.classify(&mut x)?;
        e += eq as u64;
        s += st as u64;
    }
    Some(TemplateCount {
        i: ts.i,
        e_raw: e,
        s_raw: s,
    })
}
