use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use thiserror::Error;

use ndim_core::{IntegralSpec, Range};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("malformed rational {0:?}: expected an integer or p/q")]
    BadRational(String),
    #[error("mass {0} must be positive")]
    NonPositiveMass(String),
    #[error("denominator exponent {name} = {value} must be ≤ 0")]
    PositiveDenominatorExponent { name: &'static str, value: i64 },
    #[error("numerator exponent j = {0} must be ≥ 0")]
    NegativeNumeratorExponent(i64),
    #[error("unknown range {0:?}: expected full or half")]
    BadRange(String),
    #[error("malformed record: {0}")]
    BadRecord(String),
}

pub fn parse_rational(text: &str) -> Result<BigRational, SpecError> {
    let bad = || SpecError::BadRational(text.to_string());
    let t = text.trim();
    let (n, d) = t.split_once('/').unwrap_or((t, "1"));
    let int = |s: &str| -> Option<BigInt> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    };
    let n = int(n).ok_or_else(bad)?;
    let d = int(d).ok_or_else(bad)?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

pub fn parse_range(text: &str) -> Result<Range, SpecError> {
    match text.trim().to_ascii_lowercase().as_str() {
        "full" => Ok(Range::Full),
        "half" => Ok(Range::Half),
        _ => Err(SpecError::BadRange(text.to_string())),
    }
}

/// Validates exponents and masses. Convergence is left to the engine.
pub fn build_spec(
    j: i64,
    l: i64,
    m: i64,
    mass1: BigRational,
    mass2: BigRational,
    range: Range,
) -> Result<IntegralSpec, SpecError> {
    if j < 0 {
        return Err(SpecError::NegativeNumeratorExponent(j));
    }
    if l > 0 {
        return Err(SpecError::PositiveDenominatorExponent { name: "l", value: l });
    }
    if m > 0 {
        return Err(SpecError::PositiveDenominatorExponent { name: "m", value: m });
    }
    for mass in [&mass1, &mass2] {
        if !mass.is_positive() {
            return Err(SpecError::NonPositiveMass(mass.to_string()));
        }
    }
    Ok(IntegralSpec::new(j, l, m, mass1, mass2, range))
}

/// A mass in a batch record: `4`, `"25/4"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MassField {
    Int(i64),
    Text(String),
}

impl MassField {
    fn rational(&self) -> Result<BigRational, SpecError> {
        match self {
            MassField::Int(n) => Ok(BigRational::from_integer((*n).into())),
            MassField::Text(t) => parse_rational(t),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct BatchRecord {
    j: i64,
    l: i64,
    m: i64,
    mass1: Option<MassField>,
    mass2: Option<MassField>,
    range: Option<String>,
}

/// Parses one JSONL batch line, with the same defaults as the flags.
pub fn parse_batch_line(line: &str) -> Result<IntegralSpec, SpecError> {
    let r: BatchRecord = serde_json::from_str(line).map_err(|e| SpecError::BadRecord(e.to_string()))?;
    let mass = |f: &Option<MassField>, default: i64| match f {
        Some(f) => f.rational(),
        None => Ok(BigRational::from_integer(default.into())),
    };
    let range = match &r.range {
        Some(t) => parse_range(t)?,
        None => Range::Half,
    };
    build_spec(r.j, r.l, r.m, mass(&r.mass1, 1)?, mass(&r.mass2, 4)?, range)
}
