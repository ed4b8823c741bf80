//! Exact arithmetic substrate: rationals, sparse multivariate polynomials,
//! dense univariate polynomials, rational functions and the classical
//! elimination kernels.

mod intpoly;
mod mpoly;
mod ratfunc;
mod resultant;
mod upoly;

pub use intpoly::IntPoly;
pub use mpoly::{Exp, MPoly, Var, NVARS};
pub use ratfunc::RatFunc;
pub use resultant::{mpoly_gcd, prem, resultant, squarefree_part, sylvester_matrix, univariate_gcd};
pub use upoly::UPoly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::MsrsError;

/// Arbitrary-precision rational, always in lowest terms.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"a/b"`, `"a"`, or a plain decimal like `"1e-9"` / `"0.25"`.
pub fn parse_rat(s: &str) -> Result<Rat, MsrsError> {
    let t = s.trim();
    let bad = || MsrsError::Parse(format!("not a rational: {s:?}"));
    if let Some((a, b)) = t.split_once('/') {
        let n: BigInt = a.trim().parse().map_err(|_| bad())?;
        let d: BigInt = b.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(n, d));
    }
    if let Ok(n) = t.parse::<BigInt>() {
        return Ok(Rat::from_integer(n));
    }
    // decimal with optional exponent, parsed exactly
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("0{ip}{fp}").parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Rat::from_integer(digits);
    if scale >= 0 {
        r *= Rat::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Rat::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// `"a/b"`, or `"a"` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    if let Some(x) = r.to_f64() {
        if x.is_finite() {
            return x;
        }
    }
    // scale huge numerators/denominators down before converting
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift > 0 {
        r / Rat::from_integer(BigInt::one() << (shift as u64))
    } else {
        r * Rat::from_integer(BigInt::one() << ((-shift) as u64))
    };
    scaled.to_f64().unwrap_or(0.0) * 2f64.powi(shift as i32)
}

/// Decimal rendering with `digits` places after the point, truncated toward zero.
pub fn fmt_decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (r.abs() * Rat::from_integer(scale.clone())).floor().to_integer();
    let ip = &scaled / &scale;
    let fp = &scaled % &scale;
    let sign = if r.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{:0>width$}", fp.to_string(), width = digits)
    }
}

/// Smallest-denominator rational strictly inside the open interval (a, b), `0 <= a < b`.
pub fn simplest_between(a: &Rat, b: &Rat) -> Rat {
    assert!(a < b && !a.is_negative());
    let n = a.floor();
    let n1 = &n + Rat::one();
    if &n1 < b {
        return n1;
    }
    let lo = b - &n;
    let t = if a == &n {
        (Rat::one() / lo).floor() + Rat::one()
    } else {
        let hi = a - &n;
        simplest_between(&(Rat::one() / lo), &(Rat::one() / hi))
    };
    n + Rat::one() / t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("5/3").unwrap(), ratio(5, 3));
        assert_eq!(parse_rat("-4").unwrap(), rat(-4));
        assert_eq!(parse_rat("1e-9").unwrap(), ratio(1, 1_000_000_000));
        assert_eq!(parse_rat("0.25").unwrap(), ratio(1, 4));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&rat(0), &ratio(5, 4)), rat(1));
        assert_eq!(simplest_between(&ratio(21, 16), &rat(4)), rat(2));
        assert_eq!(simplest_between(&rat(0), &rat(1)), ratio(1, 2));
        assert_eq!(simplest_between(&rat(1), &rat(2)), ratio(3, 2));
        assert_eq!(simplest_between(&ratio(1, 3), &ratio(1, 2)), ratio(2, 5));
        assert_eq!(simplest_between(&ratio(3, 10), &ratio(1, 3)), ratio(4, 13));
    }

    #[test]
    fn decimals() {
        assert_eq!(fmt_decimal(&ratio(4, 3), 3), "1.333");
        assert_eq!(fmt_decimal(&ratio(-1, 8), 2), "-0.12");
        assert!((rat_to_f64(&ratio(1, 3)) - 1.0 / 3.0).abs() < 1e-15);
    }
}
