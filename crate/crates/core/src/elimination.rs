//! The critical polynomial B(σ): every positive σ at which the number of
//! equilibria or stable equilibria can change is a root of B.
//!
//! For a two-value template, F1 = F2 = 0 with p ≠ q is equivalent to
//! W'(p, q) = 0 together with σ = l(p)P_p/g(p), where W' is σ-free. Each
//! eigenvalue condition G_k = 0 turns into H_k(p, q) = 0 after substituting that
//! σ. Common roots of W' and H_k are projected to q, the unique p above each q
//! is read off the first subresultant, and the σ-values are collected as the
//! characteristic polynomial of σ(p(q), q) modulo the q-polynomial. The few q
//! where this parametrization breaks down go through a plain resultant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{MsrsError, Result};
use crate::exact_core::{mpoly_gcd, resultant, IntPoly, MPoly, Rat, Var};
use crate::model::MsrsModel;
use crate::modular::{self, Crt, Dense2, Dense3};
use crate::realroots;
use crate::reduction::{
    clear_denominators, diagonal_equilibrium, difference_poly, nondiagonal_equilibrium, ReducedDiagonal,
    ReducedNonDiagonal, Template,
};

// ---------- dense conversions ----------

/// Integer dense form of `f` (made primitive first) in up to three variables.
pub fn dense3(f: &MPoly, x: Var, y: Option<Var>, z: Option<Var>) -> Dense3 {
    let f = f.primitive();
    let dx = f.degree(x) as usize;
    let dy = y.map_or(0, |v| f.degree(v) as usize);
    let dz = z.map_or(0, |v| f.degree(v) as usize);
    let mut c = vec![vec![vec![BigInt::zero(); dz + 1]; dy + 1]; dx + 1];
    for (e, a) in f.terms() {
        for v in Var::ALL {
            if e[v.idx()] > 0 && v != x && Some(v) != y && Some(v) != z {
                panic!("unexpected variable {} in dense conversion", v.name());
            }
        }
        debug_assert!(a.is_integer());
        let j = y.map_or(0, |v| e[v.idx()] as usize);
        let k = z.map_or(0, |v| e[v.idx()] as usize);
        c[e[x.idx()] as usize][j][k] = a.to_integer();
    }
    Dense3 { c }
}

fn dense3_of_int(f: &IntPoly) -> Dense3 {
    Dense3 {
        c: f.coeffs().iter().map(|a| vec![vec![a.clone()]]).collect(),
    }
}

/// `Dense2` `[x][y]` viewed as a `Dense3` without `z`.
fn dense3_of_dense2(d: &Dense2) -> Dense3 {
    Dense3 {
        c: d.iter()
            .map(|row| row.iter().map(|a| vec![a.clone()]).collect())
            .collect(),
    }
}

pub fn dense2_to_mpoly(d: &Dense2, y: Var, z: Var) -> MPoly {
    let mut out = MPoly::zero();
    for (j, row) in d.iter().enumerate() {
        for (k, a) in row.iter().enumerate() {
            if !a.is_zero() {
                out = &out + &MPoly::monomial(Rat::from_integer(a.clone()), &[(y, j as u32), (z, k as u32)]);
            }
        }
    }
    out
}

fn int_of(f: &MPoly, v: Var) -> IntPoly {
    f.to_upoly(v).expect("univariate").to_intpoly()
}

/// Coefficients of `f` in `x` as integer polynomials in `y` (after making `f` primitive).
fn coeff_polys(f: &MPoly, x: Var, y: Var) -> Vec<IntPoly> {
    dense3(f, x, Some(y), None)
        .c
        .into_iter()
        .map(|row| IntPoly::new(row.into_iter().map(|s| s[0].clone()).collect()))
        .collect()
}

fn has_positive_root(f: &IntPoly) -> bool {
    f.deg() >= 1 && !realroots::isolate_positive_int(f).is_empty()
}

/// σ^k-free, squarefree, primitive; `None` when nothing σ-dependent is left.
fn normalize_sigma(f: &IntPoly) -> Option<IntPoly> {
    if f.is_zero() {
        return None;
    }
    let (g, _) = f.strip_x();
    let g = g.squarefree();
    (g.deg() >= 1).then_some(g)
}

/// Replaces σ by a/b in `f` and clears the denominator b^deg_σ(f).
fn substitute_sigma(f: &MPoly, a: &MPoly, b: &MPoly) -> MPoly {
    let cs = f.coeffs(Var::Sigma);
    let d = cs.len().saturating_sub(1);
    let mut out = MPoly::zero();
    for (j, c) in cs.iter().enumerate() {
        if !c.is_zero() {
            out = &out + &(&(c * &a.pow(j as u32)) * &b.pow((d - j) as u32));
        }
    }
    out
}

// ---------- public API ----------

/// `lc_v(f)·lc_v(g)·Res_v(f*, g*)` where `f*, g*` have their common factor removed
/// when the plain resultant vanishes. Univariate results are made squarefree.
pub fn project_pair(f: &MPoly, g: &MPoly, v: Var) -> Result<MPoly> {
    let mut r = resultant(f, g, v);
    let (mut f2, mut g2) = (f.clone(), g.clone());
    if r.is_zero() {
        let h = mpoly_gcd(f, g);
        f2 = f.exact_div(&h)?;
        g2 = g.exact_div(&h)?;
        r = resultant(&f2, &g2, v);
    }
    if r.is_zero() {
        return Err(MsrsError::IdenticallyZero { template: 0 });
    }
    let out = &(&f2.lc(v) * &g2.lc(v)) * &r;
    let vars = out.vars();
    if vars.len() == 1 {
        let sf = int_of(&out, vars[0]).squarefree();
        return Ok(MPoly::from_upoly(&sf.to_upoly(), vars[0]));
    }
    Ok(out.primitive())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contribution {
    /// 0 for the diagonal template, else the multiplicity i of p.
    pub template: u32,
    pub source: String,
    pub poly: IntPoly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPolynomial {
    /// Squarefree, primitive, positive leading coefficient, not divisible by σ.
    pub b: IntPoly,
    /// Pairwise coprime squarefree factors whose product is `b`.
    pub basis: Vec<IntPoly>,
    pub factors: Vec<Contribution>,
}

impl CriticalPolynomial {
    pub fn b_mpoly(&self) -> MPoly {
        MPoly::from_upoly(&self.b.to_upoly(), Var::Sigma)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EliminationOptions {
    /// Also project the boundary systems p = 0 and q = 0.
    pub strict: bool,
}

/// Everything downstream needs about one template i ≥ 1.
#[derive(Clone, Debug)]
pub struct TemplateSystem {
    pub i: u32,
    pub reduced: ReducedNonDiagonal,
    /// num(F1) in (σ, p, q).
    pub a1: MPoly,
    /// Δ with (p − q)Δ = num(F1 − F2).
    pub delta: MPoly,
    /// Numerators of G1..G4 (index 0..3).
    pub g_num: [MPoly; 4],
    /// Denominators of G1..G4.
    pub g_den: [MPoly; 4],
    /// Res_p(A1, Δ) as `[q][σ]` and Res_q(A1, Δ) as `[p][σ]`.
    pub rq: Dense2,
    pub rp: Dense2,
}

/// Indices of G1..G4 that are eigenvalues (nonzero multiplicity) for template i.
pub fn used_gs(n: u32, i: u32) -> Vec<usize> {
    let mut v = vec![];
    if n - i >= 2 {
        v.push(0);
    }
    if i >= 2 {
        v.push(1);
    }
    v.extend([2, 3]);
    v
}

pub fn template_system(m: &MsrsModel, i: u32) -> Result<TemplateSystem> {
    let reduced = nondiagonal_equilibrium(m, i)?;
    let a1 = clear_denominators(&reduced.f1).0;
    let delta = difference_poly(&reduced.f1, &reduced.f2)?;
    let parts: Vec<(MPoly, MPoly)> = reduced
        .gs()
        .iter()
        .map(|g| {
            let (n, d, _) = clear_denominators(g);
            (n, d)
        })
        .collect();
    let a1d = dense3(&a1, Var::P, Some(Var::Q), Some(Var::Sigma));
    let dd = dense3(&delta, Var::P, Some(Var::Q), Some(Var::Sigma));
    let rq = modular::resultant3(&a1d, &dd);
    let a1q = dense3(&a1, Var::Q, Some(Var::P), Some(Var::Sigma));
    let dq = dense3(&delta, Var::Q, Some(Var::P), Some(Var::Sigma));
    let rp = modular::resultant3(&a1q, &dq);
    let zero = |d: &Dense2| d.iter().all(|r| r.iter().all(|a| a.is_zero()));
    if zero(&rq) || zero(&rp) {
        return Err(MsrsError::InfiniteSolutions {
            template: i,
            at: "every σ".into(),
        });
    }
    Ok(TemplateSystem {
        i,
        reduced,
        a1,
        delta,
        g_num: std::array::from_fn(|k| parts[k].0.clone()),
        g_den: std::array::from_fn(|k| parts[k].1.clone()),
        rq,
        rp,
    })
}

pub fn template_systems(m: &MsrsModel) -> Result<Vec<TemplateSystem>> {
    (1..=m.n / 2).into_par_iter().map(|i| template_system(m, i)).collect()
}

pub fn critical_polynomial(m: &MsrsModel) -> Result<CriticalPolynomial> {
    let systems = template_systems(m)?;
    critical_polynomial_from(m, &systems, EliminationOptions::default())
}

pub fn critical_polynomial_from(
    m: &MsrsModel,
    systems: &[TemplateSystem],
    opts: EliminationOptions,
) -> Result<CriticalPolynomial> {
    let diag = diagonal_equilibrium(m);
    let mut factors = diagonal_factors(m, &diag, opts)?;
    let per: Vec<Vec<Contribution>> = systems
        .par_iter()
        .map(|sys| template_factors(m, &diag, sys, opts))
        .collect::<Result<_>>()?;
    factors.extend(per.into_iter().flatten());
    let mut basis: Vec<IntPoly> = vec![];
    for c in &factors {
        add_to_basis(&mut basis, c.poly.clone());
    }
    basis.sort_by(|a, b| a.deg().cmp(&b.deg()).then_with(|| a.coeffs().cmp(b.coeffs())));
    let b = basis.iter().fold(IntPoly::one(), |acc, f| acc.mul(f)).primitive();
    Ok(CriticalPolynomial { b, basis, factors })
}

/// Refines `basis` into a pairwise coprime set covering the roots of `f` too.
fn add_to_basis(basis: &mut Vec<IntPoly>, f: IntPoly) {
    let mut todo = vec![f];
    while let Some(f) = todo.pop() {
        if f.deg() == 0 {
            continue;
        }
        match basis
            .iter()
            .enumerate()
            .map(|(j, b)| (j, b.gcd(&f)))
            .find(|(_, g)| g.deg() >= 1)
        {
            None => basis.push(f.primitive()),
            Some((j, g)) => {
                let b = basis.swap_remove(j);
                todo.push(b.div_exact(&g).expect("gcd divides").primitive());
                todo.push(f.div_exact(&g).expect("gcd divides").primitive());
                todo.push(g);
            }
        }
    }
}

fn push(out: &mut Vec<Contribution>, template: u32, source: &str, f: &IntPoly) {
    if let Some(poly) = normalize_sigma(f) {
        out.push(Contribution {
            template,
            source: source.to_string(),
            poly,
        });
    }
}

fn diagonal_factors(m: &MsrsModel, diag: &ReducedDiagonal, opts: EliminationOptions) -> Result<Vec<Contribution>> {
    let t = Template::new(m, 0);
    let q = MPoly::var(Var::Q);
    let a = &m.l.compose_mpoly(&q) * &t.den(&q);
    let b = m.g.compose_mpoly(&q);
    let num_f = clear_denominators(&diag.f).0;
    let fd = dense3(&num_f, Var::Q, Some(Var::Sigma), None);
    let mut out = vec![];
    for (k, g) in [(1, &diag.g1), (2, &diag.g2)] {
        let h = substitute_sigma(&clear_denominators(g).0, &a, &b);
        if h.is_zero() {
            return Err(MsrsError::IdenticallyZero { template: 0 });
        }
        let h = h.strip_monomial();
        if h.is_constant() {
            continue;
        }
        let r = modular::resultant2(&dense3(&h, Var::Q, None, None), &fd);
        if r.is_zero() {
            return Err(MsrsError::IdenticallyZero { template: 0 });
        }
        push(&mut out, 0, &format!("G{k}"), &r);
    }
    if opts.strict {
        let at0 = num_f.eval_partial(&[(Var::Q, Rat::zero())]);
        if at0.degree(Var::Sigma) >= 1 {
            push(&mut out, 0, "boundary q=0", &int_of(&at0, Var::Sigma));
        }
    }
    Ok(out)
}

fn template_factors(
    m: &MsrsModel,
    diag: &ReducedDiagonal,
    sys: &TemplateSystem,
    opts: EliminationOptions,
) -> Result<Vec<Contribution>> {
    let i = sys.i;
    let t = Template::new(m, i);
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let pp = t.den(&p);
    let pq = t.den(&q);
    // σ = a/b on the template branch
    let a = &m.l.compose_mpoly(&p) * &pp;
    let b = m.g.compose_mpoly(&p);
    let w2 = &(&a * &m.g.compose_mpoly(&q)) - &(&(&m.l.compose_mpoly(&q) * &pq) * &b);
    let mut wp = w2.exact_div(&(&p - &q))?.primitive();
    if wp.is_zero() {
        return Err(MsrsError::IdenticallyZero { template: i });
    }
    // F1, F2 are undefined where a denominator vanishes.
    for d in [&pp, &pq] {
        wp = saturate(&wp, d);
    }
    let mut out = vec![];
    let ks = used_gs(m.n, i);
    let per_k: Vec<Vec<IntPoly>> = ks
        .par_iter()
        .map(|&k| {
            let h = substitute_sigma(&sys.g_num[k], &a, &b);
            if h.is_zero() {
                return Err(MsrsError::IdenticallyZero { template: i });
            }
            let mut h = h.strip_monomial().primitive();
            if !mpoly_gcd(&h, &wp).is_constant() {
                for d in [&pp, &pq] {
                    h = saturate(&h, d);
                }
            }
            if h.is_constant() {
                return Ok(vec![]);
            }
            rur_pair(i, &wp, &h, &a, &b, &sys.a1)
        })
        .collect::<Result<_>>()?;
    for (k, polys) in ks.iter().zip(per_k) {
        for f in polys {
            push(&mut out, i, &format!("G{}", k + 1), &f);
        }
    }

    // Branches meeting the diagonal.
    let num_f = clear_denominators(&diag.f).0;
    let wqq = wp.substitute(&[(Var::P, q.clone())]).strip_monomial();
    if !wqq.is_zero() && !wqq.is_constant() {
        let r = modular::resultant2(
            &dense3(&wqq, Var::Q, None, None),
            &dense3(&num_f, Var::Q, Some(Var::Sigma), None),
        );
        push(&mut out, i, "diagonal contact", &r);
    }

    // Branches escaping to infinity at finite σ.
    for (side, r2, lcs) in [
        ("q→∞", &sys.rq, [sys.a1.lc(Var::P), sys.delta.lc(Var::P)]),
        ("p→∞", &sys.rp, [sys.a1.lc(Var::Q), sys.delta.lc(Var::Q)]),
    ] {
        let top = IntPoly::new(r2.last().cloned().unwrap_or_default());
        push(&mut out, i, side, &top);
        let other = if side == "q→∞" { Var::Q } else { Var::P };
        for lc in lcs {
            if lc.positive_on_orthant() || (-lc.clone()).positive_on_orthant() {
                continue;
            }
            if lc.degree(other) == 0 {
                if lc.degree(Var::Sigma) >= 1 {
                    push(&mut out, i, "leading coefficient", &int_of(&lc, Var::Sigma));
                }
                continue;
            }
            let r = modular::resultant2(&dense3(&lc, other, Some(Var::Sigma), None), &dense3_of_dense2(r2));
            push(&mut out, i, "leading coefficient", &r);
        }
    }

    if opts.strict {
        for (fix, keep) in [(Var::P, Var::Q), (Var::Q, Var::P)] {
            let a0 = sys.a1.eval_partial(&[(fix, Rat::zero())]);
            let d0 = sys.delta.eval_partial(&[(fix, Rat::zero())]);
            if a0.is_zero() || d0.is_zero() {
                continue;
            }
            let r = project_boundary(&a0, &d0, keep);
            if let Some(r) = r {
                push(&mut out, i, "boundary", &r);
            }
        }
    }
    Ok(out)
}

/// `f` with every factor shared with `d` removed.
fn saturate(f: &MPoly, d: &MPoly) -> MPoly {
    let mut f = f.clone();
    loop {
        let g = mpoly_gcd(&f, d);
        if g.is_constant() {
            return f;
        }
        f = f.exact_div(&g).expect("gcd divides").primitive();
    }
}

fn project_boundary(a0: &MPoly, d0: &MPoly, v: Var) -> Option<IntPoly> {
    if a0.degree(v) == 0 || d0.degree(v) == 0 {
        return None;
    }
    let r = modular::resultant2(
        &dense3(a0, v, Some(Var::Sigma), None),
        &dense3(d0, v, Some(Var::Sigma), None),
    );
    (!r.is_zero()).then_some(r)
}

/// σ-polynomials vanishing at σ = a(p,q)/b(p) over the common roots of W' and H with q > 0.
fn rur_pair(template: u32, wp: &MPoly, h: &MPoly, a: &MPoly, b: &MPoly, a1: &MPoly) -> Result<Vec<IntPoly>> {
    let wd = dense3(wp, Var::P, Some(Var::Q), None);
    let hd = dense3(h, Var::P, Some(Var::Q), None);
    let r = modular::resultant2(&wd, &hd);
    if r.is_zero() {
        return Err(MsrsError::IdenticallyZero { template });
    }
    let (r, _) = r.strip_x();
    let r = r.squarefree();
    if !has_positive_root(&r) {
        return Ok(vec![]);
    }
    let (dw, dh) = (wd.deg_x(), hd.deg_x());
    let w_q = coeff_polys(wp, Var::P, Var::Q);
    let h_q = coeff_polys(h, Var::P, Var::Q);
    let sub = if dw == 0 || dh == 0 {
        None
    } else if dh == 1 {
        Some((h_q[1].clone(), h_q[0].clone()))
    } else if dw == 1 {
        Some((w_q[1].clone(), w_q[0].clone()))
    } else {
        Some(modular::first_subresultant(&wd, &hd))
    };
    // Integer scaling shared by a and b keeps σ = a/b.
    let l = a
        .terms()
        .chain(b.terms())
        .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let lr = Rat::from_integer(l);
    let (ai, bi) = (a.scale(&lr), b.scale(&lr));
    let mut r_good = IntPoly::one();
    if let Some((s11, _)) = &sub {
        r_good = r.clone();
        let bd = dense3(&bi, Var::P, None, None);
        let markers = [
            s11.clone(),
            modular::resultant2(&wd, &bd),
            w_q.last().unwrap().clone(),
            h_q.last().unwrap().clone(),
        ];
        for x in markers {
            let g = r_good.gcd(&x);
            r_good = r_good.div_exact(&g).expect("gcd divides");
        }
    }
    let r_bad = r.div_exact(&r_good).expect("factor").primitive();
    let mut out = vec![];
    if let Some((s11, s10)) = &sub {
        if has_positive_root(&r_good) {
            let a_coeffs = raw_coeff_polys(&ai, Var::P, Var::Q);
            let b_coeffs = raw_coeff_polys(&bi, Var::P, Var::Q);
            out.push(rur_charpoly(&r_good, s11, s10, &a_coeffs, &b_coeffs));
        }
    }
    if has_positive_root(&r_bad) {
        // A common root p = 0 would make this vanish for every σ; it lies off
        // the positive orthant, so monomial factors are dropped first.
        let ra = modular::resultant3(
            &dense3(&wp.strip_monomial(), Var::P, Some(Var::Q), Some(Var::Sigma)),
            &dense3(&a1.strip_monomial(), Var::P, Some(Var::Q), Some(Var::Sigma)),
        );
        // q-values where ra vanishes for every σ carry no σ information; they are
        // harmless unless positive.
        let content = (0..ra.iter().map(Vec::len).max().unwrap_or(0))
            .map(|j| IntPoly::new(ra.iter().map(|row| row.get(j).cloned().unwrap_or_default()).collect()))
            .fold(IntPoly::new(vec![]), |g, c| if g.is_zero() { c } else { g.gcd(&c) });
        let common = r_bad.gcd(&content);
        if has_positive_root(&common) {
            return Err(MsrsError::IdenticallyZero { template });
        }
        let r_bad = r_bad.div_exact(&common).expect("gcd divides");
        let f = modular::resultant2(&dense3_of_int(&r_bad), &dense3_of_dense2(&ra));
        if f.is_zero() {
            return Err(MsrsError::IdenticallyZero { template });
        }
        out.push(f);
    }
    Ok(out)
}

/// Like `coeff_polys` but without making the polynomial primitive; coefficients must be integers.
fn raw_coeff_polys(f: &MPoly, x: Var, y: Var) -> Vec<IntPoly> {
    let dx = f.degree(x) as usize;
    let dy = f.degree(y) as usize;
    let mut c = vec![vec![BigInt::zero(); dy + 1]; dx + 1];
    for (e, a) in f.terms() {
        assert!(a.is_integer());
        c[e[x.idx()] as usize][e[y.idx()] as usize] = a.to_integer();
    }
    c.into_iter().map(IntPoly::new).collect()
}

/// Value of `Σ_j c_j(q)·x^j` modulo `r`, with `x` itself a residue mod `r`.
fn horner_mod(cs: &[IntPoly], x: &[u64], r: &[u64], p: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = vec![];
    for c in cs.iter().rev() {
        let t = modular::mul(&acc, x, p);
        acc = modular::rem(&modular::add(&t, &modular::reduce(c, p), p), r, p);
    }
    acc
}

/// Image mod `p` of ∏_{r(α)=0} (σ − a(p*(α), α)/b(p*(α))) with p* = −s10/s11.
fn charpoly_image(r: &IntPoly, s11: &IntPoly, s10: &IntPoly, a: &[IntPoly], b: &[IntPoly], p: u64) -> Option<Vec<u64>> {
    let d = r.deg();
    let rp = modular::reduce(r, p);
    if rp.len() != d + 1 {
        return None;
    }
    let s11p = modular::rem(&modular::reduce(s11, p), &rp, p);
    let inv = modular::inv_mod_poly(&s11p, &rp, p)?;
    let neg = modular::scale(&modular::reduce(s10, p), p - 1, p);
    let pstar = modular::rem(&modular::mul(&neg, &inv, p), &rp, p);
    let av = horner_mod(a, &pstar, &rp, p);
    let bv = horner_mod(b, &pstar, &rp, p);
    let binv = modular::inv_mod_poly(&bv, &rp, p)?;
    let t = modular::rem(&modular::mul(&av, &binv, p), &rp, p);
    let lc = *rp.last().unwrap();
    let lcinv = modular::invmod(modular::powmod(lc, (d - 1) as u64, p), p);
    let xs: Vec<u64> = (0..=d as u64).collect();
    let vals: Vec<u64> = xs
        .iter()
        .map(|&s0| {
            let mut g = modular::sub(&[s0], &t, p);
            modular::trim(&mut g);
            modular::mulmod(modular::resultant(&rp, d, &g, d - 1, p), lcinv, p)
        })
        .collect();
    let mut img = modular::interpolate(&xs, &vals, p);
    img.resize(d + 1, 0);
    Some(img)
}

/// Rational vector from residues, reconstructing each entry relative to the
/// running lcm of the denominators seen so far.
fn reconstruct(crt: &Crt) -> Option<Vec<Rat>> {
    let m = &crt.modulus;
    let mut l = BigInt::one();
    let mut out = Vec::with_capacity(crt.residues.len());
    for v in &crt.residues {
        let x = (v * &l).mod_floor(m);
        let (n, d) = modular::rational_reconstruct(&x, m)?;
        out.push(Rat::new(n, &d * &l));
        l *= d;
    }
    Some(out)
}

fn matches_image(cand: &[Rat], img: &[u64], p: u64) -> bool {
    cand.iter().zip(img).all(|(c, &v)| {
        let d = modular::big_mod(c.denom(), p);
        d != 0 && modular::mulmod(modular::big_mod(c.numer(), p), modular::invmod(d, p), p) == v
    })
}

/// Monic characteristic polynomial of σ(q) over the roots of `r`, recovered by
/// multimodular reconstruction. Accepted once two further primes agree.
fn rur_charpoly(r: &IntPoly, s11: &IntPoly, s10: &IntPoly, a: &[IntPoly], b: &[IntPoly]) -> IntPoly {
    let d = r.deg();
    let mut crt = Crt::new(d + 1);
    let mut cand: Option<Vec<Rat>> = None;
    let mut confirmations = 0;
    let mut k = 0usize;
    loop {
        let p = modular::prime(k);
        k += 1;
        let Some(img) = charpoly_image(r, s11, s10, a, b, p) else {
            continue;
        };
        if let Some(c) = &cand {
            if matches_image(c, &img, p) {
                confirmations += 1;
                if confirmations >= 2 {
                    return IntPoly::from_rats(c).primitive();
                }
                continue;
            }
            confirmations = 0;
        }
        crt.add(&img, p);
        cand = reconstruct(&crt);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{rat, ratio};

    fn sd(n: u32, c: i64) -> MsrsModel {
        MsrsModel::simultaneous_decision(n, rat(c)).unwrap()
    }

    fn positive_roots(b: &CriticalPolynomial) -> Vec<f64> {
        let mut v: Vec<f64> = b
            .basis
            .iter()
            .flat_map(|f| realroots::isolate_positive_int(f).into_iter().map(move |i| (f, i)))
            .map(|(f, i)| realroots::refine_root_int(f, &i, &ratio(1, 1 << 40)).approx())
            .collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn project_pair_examples() {
        let s = MPoly::var(Var::Sigma);
        let q = MPoly::var(Var::Q);
        let r = project_pair(&(&q - &s), &(&q - &MPoly::int(2)), Var::Q).unwrap();
        assert_eq!(r.eval(&[(Var::Sigma, rat(2))]), rat(0));

        let f = &(&q - &MPoly::int(1)) * &(&q - &s);
        let g = &(&q - &MPoly::int(1)) * &(&q.pow(2) + &MPoly::int(1));
        let r = project_pair(&f, &g, Var::Q).unwrap();
        assert_eq!(r, &s.pow(2) + &MPoly::int(1));

        let m = sd(4, 4);
        let d = diagonal_equilibrium(&m);
        let nf = clear_denominators(&d.f).0;
        let g = &clear_denominators(&d.g1).0 * &clear_denominators(&d.g2).0;
        let r = project_pair(&nf, &g, Var::Q).unwrap();
        assert_eq!(r.eval(&[(Var::Sigma, rat(4))]), rat(0));
    }

    #[test]
    fn sd44_matches_worked_example() {
        let b = critical_polynomial(&sd(4, 4)).unwrap();
        let s4 = IntPoly::from_i64(&[-4, 1]);
        assert!(b.b.div_exact(&s4).is_some());
        let lc: BigInt = "42755090541778564453125".parse().unwrap();
        let c0: BigInt = "-140737488355328".parse().unwrap();
        let big = b.basis.iter().find(|f| f.deg() == 24).expect("degree 24 factor");
        assert!(
            (big.lc() == lc && big.coeffs()[0] == c0) || (big.lc() == -lc.clone() && big.coeffs()[0] == -c0.clone())
        );
        let roots = positive_roots(&b);
        assert!(roots.iter().any(|r| (r - 1.303331341644988).abs() < 1e-9));
        assert!(roots.iter().any(|r| (r - 4.0).abs() < 1e-12));
        // the i = 2 template contributes exactly σ − 4
        let b2: Vec<_> = b.factors.iter().filter(|c| c.template == 2).collect();
        for c in b2 {
            for iv in realroots::isolate_positive_int(&c.poly) {
                assert_eq!(iv, realroots::IsolatingInterval::point(rat(4)));
            }
        }
    }

    #[test]
    fn sd55_roots_present() {
        let b = critical_polynomial(&sd(5, 5)).unwrap();
        let roots = positive_roots(&b);
        for want in [1.1714130635873663, 3.9922310883779404, 5.0] {
            assert!(roots.iter().any(|r| (r - want).abs() < 1e-9), "{want} not in {roots:?}");
        }
    }

    #[test]
    fn basis_is_coprime_and_squarefree() {
        let b = critical_polynomial(&sd(3, 3)).unwrap();
        for (j, f) in b.basis.iter().enumerate() {
            assert_eq!(f.gcd(&f.derivative()).deg(), 0);
            for g in &b.basis[j + 1..] {
                assert_eq!(f.gcd(g).deg(), 0);
            }
        }
        assert_eq!(b.b.gcd(&b.b.derivative()).deg(), 0);
        assert!(b.b.coeffs()[0] != BigInt::zero());
        let roots = positive_roots(&b);
        assert!(roots.iter().any(|r| (r - 3.0).abs() < 1e-12));
    }

    #[test]
    fn other_families_terminate() {
        for m in [
            MsrsModel::mutual_inhibition(3, rat(2), ratio(1, 2)).unwrap(),
            MsrsModel::bhlh(3, rat(1), ratio(1, 2)).unwrap(),
            // degenerate subresultant at q = −1/2, shared with the fallback resultant
            MsrsModel::bhlh(3, ratio(1, 10), rat(1)).unwrap(),
            MsrsModel::simultaneous_decision(2, ratio(5, 2)).unwrap(),
        ] {
            let b = critical_polynomial(&m).unwrap();
            assert!(b.b.deg() >= 1, "{}", m.label);
        }
    }

    #[test]
    fn substitute_sigma_clears_denominator() {
        let s = MPoly::var(Var::Sigma);
        let p = MPoly::var(Var::P);
        let f = &s.pow(2) + &p;
        let a = &p + &MPoly::int(1);
        let out = substitute_sigma(&f, &a, &p);
        // (p+1)^2 + p·p^2
        assert_eq!(out, &a.pow(2) + &p.pow(3));
    }
}
