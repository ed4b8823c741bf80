use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use msrs::classify::{classify, ClassifyOptions};
use msrs::counting::CountingContext;
use msrs::exact_core::{parse_rat, Rat};
use msrs::model::{parse_model, Family, FamilyParams, MsrsModel};
use msrs::oracle::{numeric_equilibria, oracle_counts, theorem_checks};
use msrs::MsrsError;
use num_traits::Signed;
use rayon::prelude::*;

mod output;

use output::{OracleRow, Out, SweepRow};

/// Exit status when a boundary could not be confirmed or pruned.
const EXIT_UNVERIFIED: u8 = 3;
/// Exit status when the numeric oracle disagrees with the exact counts.
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "msrs",
    version,
    about = "Exact equilibrium classification for multistable regulatory systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Critical polynomial, boundaries and (e, s) on every band.
    Classify {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
    },
    /// (e, s) at a single rational σ.
    Count {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = rat_arg, allow_hyphen_values = true)]
        sigma: Rat,
    },
    /// Classification over a range of cooperativities c for fixed n.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long = "c-min", value_parser = rat_arg)]
        c_min: Rat,
        #[arg(long = "c-max", value_parser = rat_arg)]
        c_max: Rat,
        #[arg(long = "c-step", value_parser = rat_arg, default_value = "1")]
        c_step: Rat,
    },
    /// Multistart Newton at every classification sample, compared with the exact counts.
    OracleCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        starts: usize,
    },
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Model file (JSON).
    #[arg(long, conflicts_with = "family")]
    model: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_parser = rat_arg)]
    c: Option<Rat>,
    #[arg(long, value_parser = rat_arg)]
    alpha: Option<Rat>,
    #[arg(long = "K2", value_parser = rat_arg)]
    k2: Option<Rat>,
    #[arg(long = "a-t", value_parser = rat_arg)]
    a_t: Option<Rat>,
}

#[derive(Args, Clone)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    out: Format,
    /// Width to which reported boundaries are refined.
    #[arg(long = "refine-width", value_parser = rat_arg, default_value = "1/1000000000")]
    refine_width: Rat,
    /// Also project the boundary systems p = 0 and q = 0.
    #[arg(long)]
    strict: bool,
    /// Report wall-clock time per phase.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

impl ModelArgs {
    fn params(&self, c: Option<Rat>) -> Result<(Family, FamilyParams), MsrsError> {
        let family = Family::parse(
            self.family
                .as_deref()
                .ok_or_else(|| MsrsError::Parse("give --model FILE or --family NAME".into()))?,
        )?;
        let n = self.n.ok_or_else(|| MsrsError::BadParameter("missing --n".into()))?;
        Ok((
            family,
            FamilyParams {
                n,
                c: c.or_else(|| self.c.clone()),
                alpha: self.alpha.clone(),
                k2: self.k2.clone(),
                a_t: self.a_t.clone(),
            },
        ))
    }

    fn load(&self) -> Result<MsrsModel, MsrsError> {
        if let Some(path) = &self.model {
            let text =
                std::fs::read_to_string(path).map_err(|e| MsrsError::Parse(format!("{}: {e}", path.display())))?;
            return parse_model(&text);
        }
        let (f, p) = self.params(None)?;
        MsrsModel::builtin(f, p)
    }
}

impl Common {
    fn options(&self) -> ClassifyOptions {
        ClassifyOptions {
            refine_width: self.refine_width.clone(),
            strict: self.strict,
            ..Default::default()
        }
    }

    fn init_threads(&self) {
        if let Some(j) = self.jobs {
            // only fails if a pool already exists, which is harmless
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<u8, (Format, MsrsError)> {
    match cli.cmd {
        Cmd::Classify { model, common } => {
            common.init_threads();
            let fmt = common.out;
            let m = model.load().map_err(|e| (fmt, e))?;
            let r = classify(&m, &common.options()).map_err(|e| (fmt, e))?;
            let out = Out::new(fmt, common.timing);
            print!("{}", out.classification(&m, &r));
            Ok(if r.has_unverified() { EXIT_UNVERIFIED } else { 0 })
        }
        Cmd::Count { model, common, sigma } => {
            common.init_threads();
            let fmt = common.out;
            if !sigma.is_positive() {
                return Err((fmt, MsrsError::BadParameter("--sigma must be positive".into())));
            }
            let m = model.load().map_err(|e| (fmt, e))?;
            let t = Instant::now();
            let ctx = CountingContext::new(&m).map_err(|e| (fmt, e))?;
            let templates = ctx.template_counts(&sigma).map_err(|e| (fmt, e))?;
            let (e, s) = msrs::counting::aggregate(m.n, &templates).map_err(|e| (fmt, e))?;
            let out = Out::new(fmt, common.timing);
            print!("{}", out.count(&m, &sigma, e, s, &templates, t.elapsed()));
            Ok(0)
        }
        Cmd::Sweep {
            model,
            common,
            c_min,
            c_max,
            c_step,
        } => {
            common.init_threads();
            let fmt = common.out;
            if !c_step.is_positive() || c_min > c_max {
                return Err((fmt, MsrsError::BadParameter("need c-min ≤ c-max and c-step > 0".into())));
            }
            let mut cs = vec![];
            let mut c = c_min.clone();
            while c <= c_max {
                cs.push(c.clone());
                c += &c_step;
            }
            let opts = common.options();
            let results: Vec<Result<(Rat, MsrsModel, msrs::classify::ClassificationResult), MsrsError>> = cs
                .par_iter()
                .map(|c| {
                    let (f, p) = model.params(Some(c.clone()))?;
                    let m = MsrsModel::builtin(f, p)?;
                    let r = classify(&m, &opts)?;
                    Ok((c.clone(), m, r))
                })
                .collect();
            let mut rows = vec![];
            let mut unverified = false;
            for res in results {
                let (c, m, r) = res.map_err(|e| (fmt, e))?;
                unverified |= r.has_unverified();
                rows.extend(SweepRow::from_result(&m, &c, &r));
            }
            let out = Out::new(fmt, common.timing);
            print!("{}", out.sweep(&rows));
            Ok(if unverified { EXIT_UNVERIFIED } else { 0 })
        }
        Cmd::OracleCheck {
            model,
            common,
            seed,
            starts,
        } => {
            common.init_threads();
            let fmt = common.out;
            let m = model.load().map_err(|e| (fmt, e))?;
            let r = classify(&m, &common.options()).map_err(|e| (fmt, e))?;
            let rows: Vec<OracleRow> = r
                .samples
                .iter()
                .zip(&r.bands)
                .map(|(v, &exact)| {
                    let eqs = numeric_equilibria(&m, v, starts.max(1), seed);
                    OracleRow {
                        sigma: v.clone(),
                        exact,
                        oracle: oracle_counts(&eqs),
                        theorems: theorem_checks(&m, v, &eqs),
                    }
                })
                .collect();
            let bad = rows.iter().any(|r| r.exact != r.oracle || !r.theorems.passed());
            let out = Out::new(fmt, common.timing);
            print!("{}", out.oracle(&m, &rows));
            Ok(if bad {
                EXIT_MISMATCH
            } else if r.has_unverified() {
                EXIT_UNVERIFIED
            } else {
                0
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((fmt, e)) => {
            eprintln!("{}", output::error(fmt, &e));
            ExitCode::from(1)
        }
    }
}
