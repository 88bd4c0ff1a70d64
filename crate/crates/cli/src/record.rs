use serde::Serialize;
use thiserror::Error;

use ndim_core::engine::{evaluate_integral, EngineError, EvalResult, TermValue};
use ndim_core::oracles::{closed_form_oracle, quad_oracle, OracleError};
use ndim_core::IntegralSpec;

use crate::format::{format_exact, format_sum, latex_sum, ExactParts, FormatError};
use crate::spec::SpecError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub breakdown: bool,
    pub crosscheck: bool,
    pub quad_tol: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { breakdown: false, crosscheck: false, quad_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl RunError {
    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Spec(_) => "invalid-spec",
            RunError::Engine(EngineError::DivergentIntegral) => "divergent",
            RunError::Engine(_) => "engine",
            RunError::Oracle(_) => "oracle",
            RunError::Format(_) => "format",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpecEcho {
    pub j: i64,
    pub l: i64,
    pub m: i64,
    pub mass1: String,
    pub mass2: String,
    pub range: String,
}

impl From<&IntegralSpec> for SpecEcho {
    fn from(s: &IntegralSpec) -> Self {
        SpecEcho {
            j: s.j,
            l: s.l,
            m: s.m,
            mass1: s.mass1.to_string(),
            mass2: s.mass2.to_string(),
            range: s.range.name().to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermRecord {
    pub label: String,
    pub exact: String,
    pub float: f64,
    pub strategy: Option<String>,
    pub vanished: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub exact_match: bool,
    pub closed_form: String,
    pub quad: f64,
    /// `|float − quad| / |quad|`.
    pub quad_delta: f64,
    /// Both hypergeometric representations gave the same exact value.
    pub representations_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub spec: SpecEcho,
    pub exact: String,
    pub latex: String,
    pub exact_parts: Vec<ExactParts>,
    pub float: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermRecord>>,
    pub representation: String,
    pub strategies: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorRecord {
    pub error: ErrorBody,
}

impl From<&RunError> for ErrorRecord {
    fn from(e: &RunError) -> Self {
        ErrorRecord { error: ErrorBody { kind: e.kind().to_string(), message: e.to_string() } }
    }
}

fn term_record(t: &TermValue) -> Result<TermRecord, FormatError> {
    Ok(TermRecord {
        label: t.label.clone(),
        exact: format_exact(&t.exact)?,
        float: t.float,
        strategy: t.strategy.map(|s| s.name().to_string()),
        vanished: t.vanished,
    })
}

fn strategy_note(t: &TermValue) -> String {
    let what = match (t.vanished, t.strategy) {
        (true, _) => "vanished",
        (false, Some(s)) => s.name(),
        (false, None) => "gamma-ratio",
    };
    format!("{}: {what}", t.label)
}

/// Evaluates one spec and assembles its output record.
pub fn run(spec: &IntegralSpec, opts: &RunOptions) -> Result<OutputRecord, RunError> {
    let result: EvalResult = evaluate_integral(spec)?;
    let terms =
        if opts.breakdown { Some(result.terms.iter().map(term_record).collect::<Result<Vec<_>, _>>()?) } else { None };
    let oracle = if opts.crosscheck {
        let closed = closed_form_oracle(spec)?;
        let quad = quad_oracle(spec, opts.quad_tol)?;
        Some(OracleReport {
            exact_match: closed == result.exact,
            closed_form: format_sum(&closed)?,
            quad,
            quad_delta: ((result.float_value - quad) / quad).abs(),
            representations_agree: result.crosscheck.as_ref().is_none_or(|c| c.agree()),
        })
    } else {
        None
    };
    Ok(OutputRecord {
        spec: spec.into(),
        exact: format_sum(&result.exact)?,
        latex: latex_sum(&result.exact)?,
        exact_parts: result.exact.terms().iter().map(ExactParts::of).collect(),
        float: result.float_value,
        terms,
        representation: result.representation.name().to_string(),
        strategies: result.terms.iter().map(strategy_note).collect(),
        oracle,
    })
}
