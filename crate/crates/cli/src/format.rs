//! Text forms of exact values.
//!
//! One term is `[-]NUM[/DEN][*pi[^(P/2)]][*sqrt(N)]`, where `P` is the
//! power of `√π` and `N` a square-free integer. A sum joins its terms with
//! `" + "` / `" - "` in canonical order; the empty sum is `0`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use ndim_core::{ExactConst, ExactSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("value is not real")]
    NonRealValue,
    #[error("cannot parse exact value {0:?}: {1}")]
    Parse(String, &'static str),
}

fn magnitude_term(v: &ExactConst) -> String {
    let c = v.coeff().abs();
    let mut out = c.numer().to_string();
    if !c.denom().is_one() {
        out.push('/');
        out.push_str(&c.denom().to_string());
    }
    match v.pi_half_power() {
        0 => {}
        2 => out.push_str("*pi"),
        p => out.push_str(&format!("*pi^({p}/2)")),
    }
    if !v.radicand().is_one() {
        out.push_str(&format!("*sqrt({})", v.radicand()));
    }
    out
}

pub fn format_exact(v: &ExactConst) -> Result<String, FormatError> {
    if !v.is_real() {
        return Err(FormatError::NonRealValue);
    }
    if v.is_zero() {
        return Ok("0".into());
    }
    let sign = if v.coeff().is_negative() { "-" } else { "" };
    Ok(format!("{sign}{}", magnitude_term(v)))
}

pub fn format_sum(s: &ExactSum) -> Result<String, FormatError> {
    join(s, format_exact, magnitude_term)
}

fn join(
    s: &ExactSum,
    first: impl Fn(&ExactConst) -> Result<String, FormatError>,
    rest: impl Fn(&ExactConst) -> String,
) -> Result<String, FormatError> {
    let Some((head, tail)) = s.terms().split_first() else {
        return Ok("0".into());
    };
    let mut out = first(head)?;
    for t in tail {
        if !t.is_real() {
            return Err(FormatError::NonRealValue);
        }
        out.push_str(if t.coeff().is_negative() { " - " } else { " + " });
        out.push_str(&rest(t));
    }
    Ok(out)
}

fn latex_magnitude(v: &ExactConst) -> String {
    let c = v.coeff().abs();
    let symbolic = v.pi_half_power() != 0 || !v.radicand().is_one();
    let mut out = if c.denom().is_one() {
        if c.is_one() && symbolic {
            String::new()
        } else {
            c.numer().to_string()
        }
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    };
    match v.pi_half_power() {
        0 => {}
        2 => out.push_str("\\pi"),
        p if p % 2 == 0 => out.push_str(&format!("\\pi^{{{}}}", p / 2)),
        p => out.push_str(&format!("\\pi^{{{p}/2}}")),
    }
    if !v.radicand().is_one() {
        out.push_str(&format!("\\sqrt{{{}}}", v.radicand()));
    }
    out
}

pub fn latex_exact(v: &ExactConst) -> Result<String, FormatError> {
    if !v.is_real() {
        return Err(FormatError::NonRealValue);
    }
    if v.is_zero() {
        return Ok("0".into());
    }
    let sign = if v.coeff().is_negative() { "-" } else { "" };
    Ok(format!("{sign}{}", latex_magnitude(v)))
}

pub fn latex_sum(s: &ExactSum) -> Result<String, FormatError> {
    join(s, latex_exact, latex_magnitude)
}

fn parse_int(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses one term of the grammar (an optional leading `-` included).
pub fn parse_exact(input: &str) -> Result<ExactConst, FormatError> {
    let err = |why| FormatError::Parse(input.to_string(), why);
    let text = input.trim();
    if text == "0" {
        return Ok(ExactConst::zero());
    }
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let mut parts = body.split('*');
    let coeff_text = parts.next().ok_or_else(|| err("empty"))?;
    let (num, den) = match coeff_text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (coeff_text, "1"),
    };
    let num = parse_int(num).ok_or_else(|| err("bad numerator"))?;
    let den = parse_int(den).ok_or_else(|| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    let mut coeff = BigRational::new(num, den);
    if negative {
        coeff = -coeff;
    }
    let mut value = ExactConst::rational(coeff);
    let mut seen_pi = false;
    let mut seen_sqrt = false;
    for factor in parts {
        if let Some(rest) = factor.strip_prefix("pi") {
            if seen_pi || seen_sqrt {
                return Err(err("pi must come once, before sqrt"));
            }
            seen_pi = true;
            let power = if rest.is_empty() {
                2
            } else {
                let inner = rest
                    .strip_prefix("^(")
                    .and_then(|r| r.strip_suffix("/2)"))
                    .ok_or_else(|| err("pi power must look like ^(P/2)"))?;
                inner.parse::<i32>().map_err(|_| err("bad pi power"))?
            };
            value = value * ExactConst::pi_pow_half(power);
        } else if let Some(rest) = factor.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            if seen_sqrt {
                return Err(err("sqrt must come once"));
            }
            seen_sqrt = true;
            let (n, d) = rest.split_once('/').unwrap_or((rest, "1"));
            let n = parse_int(n).ok_or_else(|| err("bad radicand"))?;
            let d = parse_int(d).ok_or_else(|| err("bad radicand"))?;
            if n.is_zero() || d.is_zero() {
                return Err(err("radicand must be positive"));
            }
            value = value * ExactConst::sqrt_rational(&BigRational::new(n, d));
        } else {
            return Err(err("unknown factor"));
        }
    }
    Ok(value)
}

/// Parses a sum written by [`format_sum`].
pub fn parse_sum(input: &str) -> Result<ExactSum, FormatError> {
    let mut terms = Vec::new();
    let mut rest = input.trim();
    let mut negate = false;
    loop {
        let next = [(" + ", false), (" - ", true)]
            .iter()
            .filter_map(|(sep, neg)| rest.find(sep).map(|i| (i, *neg)))
            .min_by_key(|(i, _)| *i);
        let (chunk, following) = match next {
            Some((i, neg)) => (&rest[..i], Some((&rest[i + 3..], neg))),
            None => (rest, None),
        };
        let t = parse_exact(chunk)?;
        terms.push(if negate { -t } else { t });
        match following {
            Some((r, neg)) => {
                rest = r;
                negate = neg;
            }
            None => break,
        }
    }
    Ok(ExactSum::from_terms(terms))
}

/// Structured form of one term for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ExactParts {
    pub coeff_num: String,
    pub coeff_den: String,
    pub pi_half_power: i32,
    pub surds: Vec<Surd>,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Surd {
    pub radicand: String,
    pub half_power: i32,
}

impl ExactParts {
    pub fn of(v: &ExactConst) -> Self {
        ExactParts {
            coeff_num: v.coeff().numer().to_string(),
            coeff_den: v.coeff().denom().to_string(),
            pi_half_power: v.pi_half_power(),
            surds: v
                .surds()
                .into_iter()
                .map(|(r, p): (BigUint, i32)| Surd { radicand: r.to_string(), half_power: p })
                .collect(),
        }
    }
}
