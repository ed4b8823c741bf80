//! Rendering of results as text, JSON or CSV.

use std::fmt::Write;
use std::time::Duration;

use msrs::classify::{Boundary, ClassificationResult};
use msrs::counting::TemplateCount;
use msrs::exact_core::{fmt_rat, rat_to_f64, Rat};
use msrs::model::MsrsModel;
use msrs::oracle::TheoremReport;
use msrs::MsrsError;
use serde_json::{json, Value};

use crate::Format;

pub struct Out {
    fmt: Format,
    timing: bool,
}

pub struct SweepRow {
    pub n: u32,
    pub c: Rat,
    /// 1-based index among the kept boundaries.
    pub k: usize,
    pub approx: String,
    pub lo: Rat,
    pub hi: Rat,
    pub below: (u64, u64),
    pub above: (u64, u64),
    /// Present on the largest boundary only.
    pub residual: Option<f64>,
}

pub struct OracleRow {
    pub sigma: Rat,
    pub exact: (u64, u64),
    pub oracle: (u64, u64),
    pub theorems: TheoremReport,
}

/// c − n + 1 − (c/σ)^(c/(c+1)), which vanishes at the top boundary when the
/// conjectured closed form holds.
pub fn conjecture_residual(n: u32, c: &Rat, sigma: f64) -> f64 {
    let c = rat_to_f64(c);
    c - n as f64 + 1.0 - (c / sigma).powf(c / (c + 1.0))
}

impl SweepRow {
    pub fn from_result(m: &MsrsModel, c: &Rat, r: &ClassificationResult) -> Vec<SweepRow> {
        let last = r.boundaries.len();
        r.boundaries
            .iter()
            .enumerate()
            .map(|(j, b)| SweepRow {
                n: m.n,
                c: c.clone(),
                k: j + 1,
                approx: b.approx.clone(),
                lo: b.interval.lo.clone(),
                hi: b.interval.hi.clone(),
                below: r.bands[j],
                above: r.bands[j + 1],
                residual: (j + 1 == last).then(|| conjecture_residual(m.n, c, b.interval.approx())),
            })
            .collect()
    }
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn rats(cs: impl IntoIterator<Item = Rat>) -> Value {
    Value::Array(cs.into_iter().map(|c| Value::String(fmt_rat(&c))).collect())
}

fn boundary_json(b: &Boundary) -> Value {
    let mut v = json!({
        "lo": fmt_rat(&b.interval.lo),
        "hi": fmt_rat(&b.interval.hi),
        "approx": b.approx,
        "exact": b.interval.exact,
        "flag": b.flag.name(),
        "factor": b.factor,
    });
    if let Some((e, s)) = b.at_root {
        v["at_root"] = json!({"e": e, "s": s});
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn boundary_text(b: &Boundary) -> String {
    if b.interval.exact {
        format!("= {}", fmt_rat(&b.interval.lo))
    } else {
        format!(
            "≈ {}  in [{}, {}]",
            b.approx,
            fmt_rat(&b.interval.lo),
            fmt_rat(&b.interval.hi)
        )
    }
}

impl Out {
    pub fn new(fmt: Format, timing: bool) -> Self {
        Self { fmt, timing }
    }

    pub fn classification(&self, m: &MsrsModel, r: &ClassificationResult) -> String {
        let b = &r.critical.b;
        let t = &r.timing;
        match self.fmt {
            Format::Json => {
                let mut v = json!({
                    "model": m.to_json(),
                    "label": m.label,
                    "B": rats(b.coeffs().iter().map(|c| Rat::from_integer(c.clone()))),
                    "boundaries": r.boundaries.iter().map(boundary_json).collect::<Vec<_>>(),
                    "bands": r.bands.iter().zip(&r.samples).map(|((e, s), v)| {
                        json!({"e": e, "s": s, "sample": fmt_rat(v)})
                    }).collect::<Vec<_>>(),
                    "diagnostics": {
                        "B_degree": b.deg(),
                        "basis_degrees": r.critical.basis.iter().map(|f| f.deg()).collect::<Vec<_>>(),
                        "contributions": r.critical.factors.iter().map(|f| json!({
                            "template": f.template,
                            "source": f.source,
                            "degree": f.poly.deg(),
                        })).collect::<Vec<_>>(),
                        "roots": r.roots.iter().map(boundary_json).collect::<Vec<_>>(),
                        "warnings": r.warnings,
                    },
                });
                if self.timing {
                    v["timing"] = json!({
                        "reduction": secs(t.reduction),
                        "elimination": secs(t.elimination),
                        "isolation": secs(t.isolation),
                        "counting": secs(t.counting),
                    });
                }
                pretty(&v)
            }
            Format::Csv => {
                let mut s = String::from("band,lower,upper,sample,e,s\n");
                for (j, ((e, st), v)) in r.bands.iter().zip(&r.samples).enumerate() {
                    let lower = if j == 0 {
                        "0".into()
                    } else {
                        r.boundaries[j - 1].approx.clone()
                    };
                    let upper = r
                        .boundaries
                        .get(j)
                        .map(|b| b.approx.clone())
                        .unwrap_or_else(|| "inf".into());
                    writeln!(s, "{},{lower},{upper},{},{e},{st}", j + 1, fmt_rat(v)).unwrap();
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                writeln!(s, "model: {}", m.label).unwrap();
                writeln!(
                    s,
                    "B: degree {}, leading coefficient {}, constant term {}, {} coprime factor(s)",
                    b.deg(),
                    b.lc(),
                    b.coeffs()[0],
                    r.critical.basis.len()
                )
                .unwrap();
                writeln!(s, "boundaries:").unwrap();
                for (k, bd) in r.boundaries.iter().enumerate() {
                    writeln!(s, "  σ{} {}  ({})", k + 1, boundary_text(bd), bd.flag.name()).unwrap();
                }
                if r.boundaries.is_empty() {
                    writeln!(s, "  none").unwrap();
                }
                writeln!(s, "bands:").unwrap();
                for (j, (e, st)) in r.bands.iter().enumerate() {
                    let lo = if j == 0 { "0".to_string() } else { format!("σ{j}") };
                    let hi = if j == r.boundaries.len() {
                        "∞".to_string()
                    } else {
                        format!("σ{}", j + 1)
                    };
                    writeln!(
                        s,
                        "  {lo} < σ < {hi}: e={e} s={st}  (sample {})",
                        fmt_rat(&r.samples[j])
                    )
                    .unwrap();
                }
                let pruned: Vec<&Boundary> = r
                    .roots
                    .iter()
                    .filter(|b| b.flag == msrs::classify::BoundaryFlag::Pruned)
                    .collect();
                if !pruned.is_empty() {
                    writeln!(s, "pruned roots of B:").unwrap();
                    for b in pruned {
                        writeln!(s, "  σ {}", boundary_text(b)).unwrap();
                    }
                }
                for w in &r.warnings {
                    writeln!(s, "warning: {w}").unwrap();
                }
                if self.timing {
                    writeln!(
                        s,
                        "timing: reduction {:.3}s, elimination {:.3}s, isolation {:.3}s, counting {:.3}s",
                        secs(t.reduction),
                        secs(t.elimination),
                        secs(t.isolation),
                        secs(t.counting)
                    )
                    .unwrap();
                }
                s
            }
        }
    }

    pub fn count(
        &self,
        m: &MsrsModel,
        sigma: &Rat,
        e: u64,
        s: u64,
        templates: &[TemplateCount],
        elapsed: Duration,
    ) -> String {
        match self.fmt {
            Format::Json => {
                let mut v = json!({
                    "label": m.label,
                    "sigma": fmt_rat(sigma),
                    "e": e,
                    "s": s,
                    "templates": templates.iter().map(|t| json!({
                        "i": t.i, "e_raw": t.e_raw, "s_raw": t.s_raw,
                    })).collect::<Vec<_>>(),
                });
                if self.timing {
                    v["timing"] = json!({"counting": secs(elapsed)});
                }
                pretty(&v)
            }
            Format::Csv => format!("sigma,e,s\n{},{e},{s}\n", fmt_rat(sigma)),
            Format::Text => {
                let mut out = format!("e={e} s={s}\n");
                if self.timing {
                    writeln!(out, "timing: counting {:.3}s", secs(elapsed)).unwrap();
                }
                out
            }
        }
    }

    pub fn sweep(&self, rows: &[SweepRow]) -> String {
        let residual = |r: &SweepRow| r.residual.map(|x| format!("{x:e}")).unwrap_or_default();
        match self.fmt {
            Format::Json => pretty(&Value::Array(
                rows.iter()
                    .map(|r| {
                        json!({
                            "n": r.n, "c": fmt_rat(&r.c), "k": r.k,
                            "sigma": r.approx, "lo": fmt_rat(&r.lo), "hi": fmt_rat(&r.hi),
                            "below": {"e": r.below.0, "s": r.below.1},
                            "above": {"e": r.above.0, "s": r.above.1},
                            "residual": r.residual,
                        })
                    })
                    .collect(),
            )),
            Format::Csv => {
                let mut s = String::from("n,c,k,sigma,lo,hi,e_below,s_below,e_above,s_above,residual\n");
                for r in rows {
                    writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        r.n,
                        fmt_rat(&r.c),
                        r.k,
                        r.approx,
                        fmt_rat(&r.lo),
                        fmt_rat(&r.hi),
                        r.below.0,
                        r.below.1,
                        r.above.0,
                        r.above.1,
                        residual(r)
                    )
                    .unwrap();
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                for r in rows {
                    write!(
                        s,
                        "n={} c={} σ{}={}  ({},{}) -> ({},{})",
                        r.n,
                        fmt_rat(&r.c),
                        r.k,
                        r.approx,
                        r.below.0,
                        r.below.1,
                        r.above.0,
                        r.above.1
                    )
                    .unwrap();
                    if r.residual.is_some() {
                        write!(s, "  residual {}", residual(r)).unwrap();
                    }
                    s.push('\n');
                }
                s
            }
        }
    }

    pub fn oracle(&self, m: &MsrsModel, rows: &[OracleRow]) -> String {
        match self.fmt {
            Format::Json => pretty(&json!({
                "label": m.label,
                "samples": rows.iter().map(|r| json!({
                    "sigma": fmt_rat(&r.sigma),
                    "exact": {"e": r.exact.0, "s": r.exact.1},
                    "oracle": {"e": r.oracle.0, "s": r.oracle.1},
                    "match": r.exact == r.oracle,
                    "equilibria_checked": r.theorems.checked,
                    "violations": r.theorems.violations,
                })).collect::<Vec<_>>(),
            })),
            Format::Csv => {
                let mut s = String::from("sigma,e_exact,s_exact,e_oracle,s_oracle,violations\n");
                for r in rows {
                    writeln!(
                        s,
                        "{},{},{},{},{},{}",
                        fmt_rat(&r.sigma),
                        r.exact.0,
                        r.exact.1,
                        r.oracle.0,
                        r.oracle.1,
                        r.theorems.violations.len()
                    )
                    .unwrap();
                }
                s
            }
            Format::Text => {
                let mut s = format!("model: {}\n", m.label);
                for r in rows {
                    let verdict = if r.exact == r.oracle { "match" } else { "MISMATCH" };
                    writeln!(
                        s,
                        "σ={}: exact e={} s={}, oracle e={} s={}  {verdict}; {} equilibria checked, {} theorem violation(s)",
                        fmt_rat(&r.sigma),
                        r.exact.0,
                        r.exact.1,
                        r.oracle.0,
                        r.oracle.1,
                        r.theorems.checked,
                        r.theorems.violations.len()
                    )
                    .unwrap();
                    for v in &r.theorems.violations {
                        writeln!(s, "  {v}").unwrap();
                    }
                }
                s
            }
        }
    }
}

pub fn error(fmt: Format, e: &MsrsError) -> String {
    match fmt {
        Format::Json => json!({"error": {"kind": e.kind(), "message": e.to_string()}}).to_string(),
        _ => format!("error [{}]: {e}", e.kind()),
    }
}
