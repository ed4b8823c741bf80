//! Multistable regulatory systems, dx_k/dt = −l(x_k) + σ·g(x_k)/(P(x) + h(x_k)),
//! with P in the composed symmetric form A(Σ_m ψ(x_m)).

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{MsrsError, Result};
use crate::exact_core::{fmt_rat, parse_rat, rat, MPoly, Rat, UPoly, Var};
use crate::realroots;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SimultaneousDecision,
    MutualInhibition,
    Bhlh,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::SimultaneousDecision => "simultaneous_decision",
            Family::MutualInhibition => "mutual_inhibition",
            Family::Bhlh => "bhlh",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "simultaneous_decision" | "sd" => Ok(Family::SimultaneousDecision),
            "mutual_inhibition" | "mi" => Ok(Family::MutualInhibition),
            "bhlh" => Ok(Family::Bhlh),
            other => Err(MsrsError::Parse(format!("unknown family {other:?}"))),
        }
    }
}

/// Parameters of a built-in family. Unused fields are ignored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FamilyParams {
    pub n: u32,
    pub c: Option<Rat>,
    pub alpha: Option<Rat>,
    pub k2: Option<Rat>,
    pub a_t: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum ModelSource {
    Builtin(Family, FamilyParams),
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MsrsModel {
    pub n: u32,
    /// l, g, h, A, ψ as polynomials in the stored variable z = x^(1/c_den).
    pub l: UPoly,
    pub g: UPoly,
    pub h: UPoly,
    pub a: UPoly,
    pub psi: UPoly,
    pub c_den: u32,
    pub label: String,
    pub source: ModelSource,
}

fn zpow(k: u64) -> UPoly {
    UPoly::monomial(Rat::one(), k as usize)
}

fn need(p: &Option<Rat>, what: &str) -> Result<Rat> {
    match p {
        Some(v) => Ok(v.clone()),
        None => Err(MsrsError::BadParameter(format!("missing {what}"))),
    }
}

fn positive(v: &Rat, what: &str) -> Result<()> {
    if v.is_positive() {
        Ok(())
    } else {
        Err(MsrsError::BadParameter(format!(
            "{what} must be positive, got {}",
            fmt_rat(v)
        )))
    }
}

/// Splits a positive rational cooperativity into integer exponent and denominator.
fn split_c(c: &Rat) -> Result<(u64, u32)> {
    positive(c, "c")?;
    let a: u64 = c
        .numer()
        .try_into()
        .map_err(|_| MsrsError::BadParameter("c numerator too large".into()))?;
    let b: u32 = c
        .denom()
        .try_into()
        .map_err(|_| MsrsError::BadParameter("c denominator too large".into()))?;
    Ok((a, b))
}

impl MsrsModel {
    pub fn builtin(family: Family, params: FamilyParams) -> Result<Self> {
        let n = params.n;
        if n < 2 {
            return Err(MsrsError::BadParameter(format!("n must be at least 2, got {n}")));
        }
        let one_plus_s = UPoly::from_ints(&[1, 1]);
        let (l, g, h, a, psi, c_den, label) = match family {
            Family::SimultaneousDecision => {
                let c = need(&params.c, "c")?;
                let (ca, cb) = split_c(&c)?;
                (
                    zpow(cb as u64),
                    UPoly::from_ints(&[1]),
                    zpow(ca).scale(&rat(-1)),
                    one_plus_s,
                    zpow(ca),
                    cb,
                    format!("simultaneous_decision(n={n}, c={})", fmt_rat(&c)),
                )
            }
            Family::MutualInhibition => {
                let c = need(&params.c, "c")?;
                let alpha = need(&params.alpha, "alpha")?;
                if alpha.is_negative() {
                    return Err(MsrsError::BadParameter("alpha must be nonnegative".into()));
                }
                let (ca, cb) = split_c(&c)?;
                (
                    zpow(cb as u64).sub(&UPoly::constant(alpha.clone())),
                    zpow(ca),
                    UPoly::zero(),
                    one_plus_s,
                    zpow(ca),
                    cb,
                    format!("mutual_inhibition(n={n}, c={}, alpha={})", fmt_rat(&c), fmt_rat(&alpha)),
                )
            }
            Family::Bhlh => {
                let k2 = need(&params.k2, "K2")?;
                let at = need(&params.a_t, "a_t")?;
                positive(&k2, "K2")?;
                positive(&at, "a_t")?;
                let k = &k2 / (&at * &at);
                (
                    zpow(1),
                    zpow(2),
                    zpow(2),
                    UPoly::from_ints(&[1, 2, 1]).scale(&k),
                    zpow(1),
                    1,
                    format!("bhlh(n={n}, K2={}, a_t={})", fmt_rat(&k2), fmt_rat(&at)),
                )
            }
        };
        Ok(Self {
            n,
            l,
            g,
            h,
            a,
            psi,
            c_den,
            label,
            source: ModelSource::Builtin(family, params),
        })
    }

    pub fn simultaneous_decision(n: u32, c: Rat) -> Result<Self> {
        Self::builtin(
            Family::SimultaneousDecision,
            FamilyParams {
                n,
                c: Some(c),
                ..Default::default()
            },
        )
    }

    pub fn mutual_inhibition(n: u32, c: Rat, alpha: Rat) -> Result<Self> {
        Self::builtin(
            Family::MutualInhibition,
            FamilyParams {
                n,
                c: Some(c),
                alpha: Some(alpha),
                ..Default::default()
            },
        )
    }

    pub fn bhlh(n: u32, k2: Rat, a_t: Rat) -> Result<Self> {
        Self::builtin(
            Family::Bhlh,
            FamilyParams {
                n,
                k2: Some(k2),
                a_t: Some(a_t),
                ..Default::default()
            },
        )
    }

    pub fn custom(n: u32, l: UPoly, g: UPoly, h: UPoly, a: UPoly, psi: UPoly) -> Result<Self> {
        if n < 2 {
            return Err(MsrsError::BadParameter(format!("n must be at least 2, got {n}")));
        }
        if l.is_zero() {
            return Err(MsrsError::BadParameter("l must be nonzero".into()));
        }
        if psi.degree().unwrap_or(0) == 0 && a.degree().unwrap_or(0) == 0 {
            return Err(MsrsError::BadParameter("A or psi must be nonconstant".into()));
        }
        Ok(Self {
            n,
            l,
            g,
            h,
            a,
            psi,
            c_den: 1,
            label: format!("custom(n={n})"),
            source: ModelSource::Custom,
        })
    }

    /// Cooperativity as written in the source, for reporting.
    pub fn c(&self) -> Option<Rat> {
        match &self.source {
            ModelSource::Builtin(_, p) => p.c.clone(),
            ModelSource::Custom => None,
        }
    }

    /// P(x) = A(Σ ψ(x_m)) with the coordinates given as polynomials in the stored variable.
    pub fn p_of(&self, coords: &[MPoly]) -> MPoly {
        let s = coords
            .iter()
            .fold(MPoly::zero(), |acc, c| &acc + &self.psi.compose_mpoly(c));
        self.a.compose_mpoly(&s)
    }

    /// Exact P at a rational point given in stored coordinates.
    pub fn p_at(&self, z: &[Rat]) -> Rat {
        let s = z.iter().fold(Rat::zero(), |acc, x| acc + self.psi.eval(x));
        self.a.eval(&s)
    }

    /// f_k at a rational point of stored coordinates.
    pub fn f_at(&self, sigma: &Rat, z: &[Rat], k: usize) -> Rat {
        let den = self.p_at(z) + self.h.eval(&z[k]);
        -self.l.eval(&z[k]) + sigma * self.g.eval(&z[k]) / den
    }

    pub fn to_json(&self) -> Value {
        let poly =
            |u: &UPoly| -> Value { Value::Array(u.coeffs().iter().map(|c| Value::String(fmt_rat(c))).collect()) };
        match &self.source {
            ModelSource::Builtin(f, p) => {
                let mut o = json!({"family": f.name(), "n": p.n});
                let m = o.as_object_mut().unwrap();
                for (k, v) in [("c", &p.c), ("alpha", &p.alpha), ("K2", &p.k2), ("a_t", &p.a_t)] {
                    if let Some(v) = v {
                        m.insert(k.into(), Value::String(fmt_rat(v)));
                    }
                }
                o
            }
            ModelSource::Custom => json!({"custom": {
                "n": self.n,
                "l": poly(&self.l),
                "g": poly(&self.g),
                "h": poly(&self.h),
                "A": poly(&self.a),
                "psi": poly(&self.psi),
            }}),
        }
    }

    pub fn validate(&self, sigma_samples: &[Rat]) -> ValidationReport {
        validate_model(self, sigma_samples)
    }
}

// ---------- parsing ----------

fn json_rat(v: &Value, field: &str) -> Result<Rat> {
    match v {
        Value::String(s) => {
            parse_rat(s).map_err(|_| MsrsError::Parse(format!("field `{field}`: not a rational: {s:?}")))
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(rat(i))
            } else {
                parse_rat(&n.to_string()).map_err(|_| MsrsError::Parse(format!("field `{field}`: bad number {n}")))
            }
        }
        _ => Err(MsrsError::Parse(format!(
            "field `{field}`: expected a rational as \"a/b\" or an integer"
        ))),
    }
}

fn json_n(o: &serde_json::Map<String, Value>) -> Result<u32> {
    let v = o.get("n").ok_or_else(|| MsrsError::Parse("missing field `n`".into()))?;
    let n = v
        .as_u64()
        .ok_or_else(|| MsrsError::Parse("field `n`: expected a positive integer".into()))?;
    u32::try_from(n).map_err(|_| MsrsError::Parse("field `n`: too large".into()))
}

fn json_poly(o: &serde_json::Map<String, Value>, field: &str) -> Result<UPoly> {
    let arr = o
        .get(field)
        .ok_or_else(|| MsrsError::Parse(format!("missing field `{field}`")))?
        .as_array()
        .ok_or_else(|| MsrsError::Parse(format!("field `{field}`: expected an array of coefficients")))?;
    let cs = arr
        .iter()
        .enumerate()
        .map(|(k, v)| json_rat(v, &format!("{field}[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(UPoly::new(cs))
}

/// Parses the model file format (JSON).
pub fn parse_model(text: &str) -> Result<MsrsModel> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| MsrsError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let o = v
        .as_object()
        .ok_or_else(|| MsrsError::Parse("model must be a JSON object".into()))?;
    if let Some(c) = o.get("custom") {
        let c = c
            .as_object()
            .ok_or_else(|| MsrsError::Parse("field `custom`: expected an object".into()))?;
        let n = json_n(c)?;
        return MsrsModel::custom(
            n,
            json_poly(c, "l")?,
            json_poly(c, "g")?,
            json_poly(c, "h")?,
            json_poly(c, "A")?,
            json_poly(c, "psi")?,
        );
    }
    let fam = o
        .get("family")
        .and_then(|f| f.as_str())
        .ok_or_else(|| MsrsError::Parse("expected field `family` (string) or `custom`".into()))?;
    let family = Family::parse(fam)?;
    let opt = |k: &str| -> Result<Option<Rat>> { o.get(k).map(|v| json_rat(v, k)).transpose() };
    let params = FamilyParams {
        n: json_n(o)?,
        c: opt("c")?,
        alpha: opt("alpha")?,
        k2: match opt("K2")? {
            Some(v) => Some(v),
            None => opt("k2")?,
        },
        a_t: opt("a_t")?,
    };
    MsrsModel::builtin(family, params)
}

// ---------- validation ----------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Positivity {
    Proved,
    Unproved,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub denominator_positivity: Positivity,
    /// (σ sample, number of positive extreme points of σg/l − h).
    pub extreme_point_checks: Vec<(Rat, usize)>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn extreme_points_ok(&self) -> bool {
        self.extreme_point_checks.iter().all(|(_, k)| *k <= 1)
    }
}

/// Reduced denominators A(s) + h(·) of every template, in p and q.
pub fn template_denominators(m: &MsrsModel) -> Vec<MPoly> {
    let p = MPoly::var(Var::P);
    let q = MPoly::var(Var::Q);
    let n = m.n as usize;
    let mut out = vec![];
    let diag = m.p_of(&vec![q.clone(); n]);
    out.push(&diag + &m.h.compose_mpoly(&q));
    for i in 1..=n / 2 {
        let mut coords = vec![p.clone(); i];
        coords.extend(std::iter::repeat_n(q.clone(), n - i));
        let pp = m.p_of(&coords);
        out.push(&pp + &m.h.compose_mpoly(&p));
        out.push(&pp + &m.h.compose_mpoly(&q));
    }
    out
}

/// Numerator of ∂a/∂z for a(σ, z) = σ g(z)/l(z) − h(z), at a fixed σ.
pub fn extreme_numerator(m: &MsrsModel, sigma: &Rat) -> UPoly {
    let t = m.g.derivative().mul(&m.l).sub(&m.g.mul(&m.l.derivative()));
    t.scale(sigma).sub(&m.h.derivative().mul(&m.l.mul(&m.l)))
}

pub fn validate_model(m: &MsrsModel, sigma_samples: &[Rat]) -> ValidationReport {
    let mut warnings = vec![];
    let proved = template_denominators(m).iter().all(|d| d.positive_on_orthant());
    if !proved {
        warnings.push("template denominators not proved positive; counting checks them at runtime".into());
    }
    let mut checks = vec![];
    for s in sigma_samples {
        let num = extreme_numerator(m, s).to_intpoly();
        let count = if num.is_zero() {
            warnings.push(format!("σg/l − h is constant in z at σ = {}", fmt_rat(s)));
            0
        } else {
            num.squarefree_decomposition()
                .iter()
                .enumerate()
                .filter(|(k, _)| k % 2 == 0)
                .map(|(_, f)| realroots::isolate_positive_int(f).len())
                .sum()
        };
        if count > 1 {
            warnings.push(format!(
                "σg/l − h has {count} positive extreme points at σ = {}",
                fmt_rat(s)
            ));
        }
        checks.push((s.clone(), count));
    }
    ValidationReport {
        denominator_positivity: if proved {
            Positivity::Proved
        } else {
            Positivity::Unproved
        },
        extreme_point_checks: checks,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::ratio;

    #[test]
    fn builtin_examples() {
        let m = MsrsModel::simultaneous_decision(4, rat(4)).unwrap();
        assert_eq!(m.l, UPoly::from_ints(&[0, 1]));
        assert_eq!(m.g, UPoly::from_ints(&[1]));
        assert_eq!(m.h, UPoly::from_ints(&[0, 0, 0, 0, -1]));
        assert_eq!(m.psi, UPoly::from_ints(&[0, 0, 0, 0, 1]));
        assert_eq!(m.a, UPoly::from_ints(&[1, 1]));

        let mi = MsrsModel::mutual_inhibition(3, rat(2), rat(1)).unwrap();
        assert_eq!(mi.l, UPoly::from_ints(&[-1, 1]));
        assert_eq!(mi.g, UPoly::from_ints(&[0, 0, 1]));
        assert!(mi.h.is_zero());

        let b = MsrsModel::bhlh(2, rat(1), rat(1)).unwrap();
        assert_eq!(b.a, UPoly::from_ints(&[1, 2, 1]));
        assert_eq!(b.h, UPoly::from_ints(&[0, 0, 1]));
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            MsrsModel::simultaneous_decision(4, rat(0)),
            Err(MsrsError::BadParameter(_))
        ));
        assert!(MsrsModel::simultaneous_decision(1, rat(2)).is_err());
        assert!(MsrsModel::bhlh(3, rat(-1), rat(1)).is_err());
    }

    #[test]
    fn parse_examples() {
        let m = parse_model(r#"{"family":"simultaneous_decision","n":4,"c":"4"}"#).unwrap();
        assert_eq!(m, MsrsModel::simultaneous_decision(4, rat(4)).unwrap());
        let c = parse_model(r#"{"custom":{"n":3,"l":[0,1],"g":["1"],"h":[0],"A":[1,1],"psi":[0,"1/2"]}}"#).unwrap();
        assert_eq!(c.l, UPoly::from_ints(&[0, 1]));
        assert_eq!(c.psi.coeff(1), ratio(1, 2));
        let r = parse_model(r#"{"family":"simultaneous_decision","n":4,"c":"5/3"}"#).unwrap();
        assert_eq!(r.c_den, 3);
        assert_eq!(r.l, UPoly::from_ints(&[0, 0, 0, 1]));
        assert_eq!(r.psi.degree(), Some(5));
    }

    #[test]
    fn parse_errors_name_the_problem() {
        let e = parse_model("{\"family\": \"sd\",\n \"n\": }").unwrap_err();
        assert!(matches!(&e, MsrsError::Parse(s) if s.contains("line 2")));
        let e = parse_model(r#"{"family":"sd","c":"4"}"#).unwrap_err();
        assert!(matches!(&e, MsrsError::Parse(s) if s.contains("`n`")));
        let e = parse_model(r#"{"family":"sd","n":4,"c":"x"}"#).unwrap_err();
        assert!(matches!(&e, MsrsError::Parse(s) if s.contains("`c`")));
    }

    #[test]
    fn json_round_trip() {
        let models = [
            MsrsModel::simultaneous_decision(5, ratio(7, 2)).unwrap(),
            MsrsModel::mutual_inhibition(3, rat(2), ratio(1, 3)).unwrap(),
            MsrsModel::bhlh(2, rat(3), ratio(1, 2)).unwrap(),
            parse_model(r#"{"custom":{"n":2,"l":[0,1],"g":[1],"h":[0],"A":[1,1],"psi":[0,0,1]}}"#).unwrap(),
        ];
        for m in models {
            let text = m.to_json().to_string();
            assert_eq!(parse_model(&text).unwrap(), m);
        }
    }

    #[test]
    fn symmetric_p() {
        let m = MsrsModel::bhlh(3, rat(2), ratio(1, 2)).unwrap();
        let pt = [ratio(1, 3), rat(2), ratio(5, 7)];
        let perm = [rat(2), ratio(5, 7), ratio(1, 3)];
        assert_eq!(m.p_at(&pt), m.p_at(&perm));
    }

    #[test]
    fn validation_examples() {
        let m = MsrsModel::simultaneous_decision(4, rat(4)).unwrap();
        let r = m.validate(&[rat(1)]);
        assert_eq!(r.denominator_positivity, Positivity::Proved);
        assert_eq!(r.extreme_point_checks, vec![(rat(1), 1)]);
        let b = MsrsModel::bhlh(2, rat(1), rat(1)).unwrap();
        let r = b.validate(&[rat(1)]);
        assert!(r.extreme_points_ok());
        for m in [
            MsrsModel::mutual_inhibition(4, rat(3), ratio(1, 2)).unwrap(),
            MsrsModel::bhlh(4, rat(1), rat(2)).unwrap(),
            MsrsModel::simultaneous_decision(6, ratio(5, 2)).unwrap(),
        ] {
            assert_eq!(m.validate(&[]).denominator_positivity, Positivity::Proved);
        }
    }
}
