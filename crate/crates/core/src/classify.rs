//! End-to-end classification: critical polynomial, isolation of its positive
//! roots, counting on every band, and pruning of boundaries where nothing changes.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::counting::CountingContext;
use crate::elimination::{critical_polynomial_from, template_systems, CriticalPolynomial, EliminationOptions};
use crate::error::{MsrsError, Result};
use crate::exact_core::{fmt_decimal, fmt_rat, simplest_between, IntPoly, Rat};
use crate::interval::Iv;
use crate::model::MsrsModel;
use crate::realroots::{bisect_root, canonical_samples_with, isolate_positive_int, refine_root_int, IsolatingInterval};
use crate::reduction::{diagonal_equilibrium, nondiagonal_equilibrium};

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    /// Width to which kept boundaries are refined for reporting.
    pub refine_width: Rat,
    pub strict: bool,
    /// σ-interval refinement levels tried when recounting at an irrational root;
    /// 0 disables recounting altogether.
    pub recount_budget: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            refine_width: Rat::new(BigInt::one(), BigInt::from(1_000_000_000u64)),
            strict: false,
            recount_budget: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryFlag {
    VerifiedChange,
    Pruned,
    KeptUnverified,
}

impl BoundaryFlag {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryFlag::VerifiedChange => "verified_change",
            BoundaryFlag::Pruned => "pruned",
            BoundaryFlag::KeptUnverified => "kept_unverified",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Boundary {
    pub interval: IsolatingInterval,
    /// Index into the basis of B of the factor vanishing here.
    pub factor: usize,
    pub flag: BoundaryFlag,
    /// Counts at the root itself, when they were computed.
    pub at_root: Option<(u64, u64)>,
    /// Decimal midpoint of the refined interval.
    pub approx: String,
}

#[derive(Clone, Debug, Default)]
pub struct PhaseTiming {
    pub reduction: Duration,
    pub elimination: Duration,
    pub isolation: Duration,
    pub counting: Duration,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub critical: CriticalPolynomial,
    /// Kept boundaries in increasing order.
    pub boundaries: Vec<Boundary>,
    /// `(e, s)` per band; one more than the boundaries.
    pub bands: Vec<(u64, u64)>,
    /// The sample point each band was counted at.
    pub samples: Vec<Rat>,
    /// Every positive root of B with its flag, pruned ones included.
    pub roots: Vec<Boundary>,
    /// Non-fatal model validation messages.
    pub warnings: Vec<String>,
    pub timing: PhaseTiming,
}

impl ClassificationResult {
    pub fn has_unverified(&self) -> bool {
        self.roots.iter().any(|b| b.flag == BoundaryFlag::KeptUnverified)
    }
}

pub fn classify(m: &MsrsModel, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    let mut timing = PhaseTiming::default();
    let t = Instant::now();
    diagonal_equilibrium(m);
    for i in 1..=m.n / 2 {
        nondiagonal_equilibrium(m, i)?;
    }
    timing.reduction = t.elapsed();
    let t = Instant::now();
    let systems = template_systems(m)?;
    let crit = critical_polynomial_from(m, &systems, EliminationOptions { strict: opts.strict })?;
    timing.elimination = t.elapsed();
    let ctx = CountingContext::from_systems(m, systems);
    let mut res = classify_from(m, &ctx, crit, opts)?;
    res.timing.reduction = timing.reduction;
    res.timing.elimination = timing.elimination;
    Ok(res)
}

/// Sorted, pairwise disjoint isolating intervals of all positive roots of the basis.
pub fn isolate_basis(basis: &[IntPoly]) -> Vec<(usize, IsolatingInterval)> {
    let mut roots: Vec<(usize, IsolatingInterval)> = basis
        .iter()
        .enumerate()
        .flat_map(|(k, f)| isolate_positive_int(f).into_iter().map(move |iv| (k, iv)))
        .collect();
    loop {
        roots.sort_by(|a, b| a.1.lo.cmp(&b.1.lo));
        let Some(j) = (1..roots.len()).find(|&j| roots[j - 1].1.hi >= roots[j].1.lo) else {
            break;
        };
        // distinct coprime factors have distinct roots, so refinement separates them
        for k in [j - 1, j] {
            let (f, iv) = (&basis[roots[k].0], &roots[k].1);
            roots[k].1 = bisect_root(f, iv);
        }
    }
    roots
}

fn approx_string(iv: &IsolatingInterval, width: &Rat) -> String {
    let mid = (&iv.lo + &iv.hi) / Rat::from_integer(2.into());
    let mut digits = 0usize;
    let mut w = width.clone();
    let ten = Rat::from_integer(10.into());
    while w < Rat::one() && digits < 60 {
        w *= &ten;
        digits += 1;
    }
    fmt_decimal(&mid, digits + 1)
}

/// Counts at a root of B: exact counting for a rational root, otherwise counting
/// certified uniformly over shrinking σ-intervals. `None` means unverified.
pub fn recount_at_root(
    ctx: &CountingContext,
    f: &IntPoly,
    iv: &IsolatingInterval,
    budget: usize,
) -> Option<(u64, u64)> {
    if budget == 0 {
        return None;
    }
    if iv.exact {
        return ctx.count(&iv.lo).ok();
    }
    let mut iv = iv.clone();
    for level in 1..=budget {
        let w = Rat::new(BigInt::one(), BigInt::one() << (12 * level));
        iv = refine_root_int(f, &iv, &w);
        if iv.exact {
            return ctx.count(&iv.lo).ok();
        }
        if let Some(c) = ctx.count_over(&Iv::from_rats(&iv.lo, &iv.hi, 256)) {
            return Some(c);
        }
    }
    None
}

/// Classification with a precomputed critical polynomial.
pub fn classify_from(
    m: &MsrsModel,
    ctx: &CountingContext,
    crit: CriticalPolynomial,
    opts: &ClassifyOptions,
) -> Result<ClassificationResult> {
    let mut timing = PhaseTiming::default();
    let t = Instant::now();
    let basis = crit.basis.clone();
    let located = isolate_basis(&basis);
    let owners: Vec<usize> = located.iter().map(|r| r.0).collect();
    let mut ivs: Vec<IsolatingInterval> = located.into_iter().map(|r| r.1).collect();
    let samples = canonical_samples_with(&mut ivs, |j, iv| bisect_root(&basis[owners[j]], iv));
    timing.isolation = t.elapsed();

    let report = m.validate(&samples);
    if !report.extreme_points_ok() {
        return Err(MsrsError::Validation(format!(
            "extreme-point check failed at samples {:?}",
            report
                .extreme_point_checks
                .iter()
                .map(|(s, _)| fmt_rat(s))
                .collect::<Vec<_>>()
        )));
    }

    let t = Instant::now();
    let counted: Vec<Result<(Rat, (u64, u64))>> = samples
        .par_iter()
        .enumerate()
        .map(|(j, s)| match ctx.count(s) {
            Ok(c) => Ok((s.clone(), c)),
            Err(first) => {
                // one retry at a different rational in the same band
                let upper = ivs.get(j).map(|iv| iv.lo.clone()).unwrap_or_else(|| s + Rat::one());
                let alt = simplest_between(s, &upper);
                if alt == *s || alt.is_zero() {
                    return Err(first);
                }
                ctx.count(&alt).map(|c| (alt, c))
            }
        })
        .collect();
    let counted: Vec<(Rat, (u64, u64))> = counted.into_iter().collect::<Result<_>>()?;

    let mut bands = vec![counted[0].1];
    let mut band_samples = vec![counted[0].0.clone()];
    let mut roots = vec![];
    for (j, iv) in ivs.iter().enumerate() {
        let left = *bands.last().unwrap();
        let right = counted[j + 1].1;
        let f = &basis[owners[j]];
        let (flag, at_root) = if left != right {
            (BoundaryFlag::VerifiedChange, None)
        } else {
            match recount_at_root(ctx, f, iv, opts.recount_budget) {
                Some(c) if c == left => (BoundaryFlag::Pruned, Some(c)),
                Some(c) => (BoundaryFlag::VerifiedChange, Some(c)),
                None => (BoundaryFlag::KeptUnverified, None),
            }
        };
        if flag != BoundaryFlag::Pruned {
            bands.push(right);
            band_samples.push(counted[j + 1].0.clone());
        }
        let refined = refine_root_int(f, iv, &opts.refine_width);
        roots.push(Boundary {
            approx: approx_string(&refined, &opts.refine_width),
            interval: refined,
            factor: owners[j],
            flag,
            at_root,
        });
    }
    timing.counting = t.elapsed();
    let boundaries = roots
        .iter()
        .filter(|b| b.flag != BoundaryFlag::Pruned)
        .cloned()
        .collect();
    Ok(ClassificationResult {
        critical: crit,
        boundaries,
        bands,
        samples: band_samples,
        roots,
        warnings: report.warnings,
        timing,
    })
}
