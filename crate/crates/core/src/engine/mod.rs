//! Negative-dimensional integration of
//! `∫ (x²)^j (x²+M₁)^l (x²+M₂)^m dx`.
//!
//! The pipeline is: matching conditions → solved index systems → basis
//! terms (Pochhammer coefficient × ₂F₁) → continuation to negative
//! exponents → two equivalent representations, both evaluated exactly.

mod system;
mod term;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

pub use system::{
    build_constraints, enumerate_solutions, solve, Index, IndexCount, IndexSystem, SeriesSolution, SingularChoice,
};
pub use term::{
    analytic_continue_term, assemble_term, group_representations, CoefficientTemplate, NdimTerm, PochFactor,
    Representations,
};

use crate::exact::{pochhammer, ExactConst, ExactError, ExactSum, HalfInt, Marked};
use crate::hypergeom::{eval_2f1, EvalMode, HypError, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("integral diverges: need j ≥ 0, l ≤ 0, m ≤ 0 and j + l + m ≤ −1")]
    DivergentIntegral,
    #[error("invalid integral: {0}")]
    InvalidSpec(String),
    #[error("representations disagree: unprimed {unprimed:?} vs primed {primed:?}")]
    RepresentationMismatch { unprimed: ExactSum, primed: ExactSum },
    #[error("coefficient is not real after continuation: {0}")]
    PhaseResidue(String),
    #[error("coefficient of term {0} sits on a pole")]
    PoleInCoefficient(String),
    #[error("series does not reduce to a 2F1: {0}")]
    NotHypergeometric(String),
    #[error("term {0} was already continued")]
    AlreadyContinued(Index),
    #[error(transparent)]
    Hyp(#[from] HypError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Range {
    /// `(−∞, ∞)`.
    Full,
    /// `[0, ∞)`.
    Half,
}

impl Range {
    pub fn name(self) -> &'static str {
        match self {
            Range::Full => "full",
            Range::Half => "half",
        }
    }

    fn factor(self) -> ExactConst {
        match self {
            Range::Full => ExactConst::one(),
            Range::Half => ExactConst::ratio(1, 2),
        }
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `∫ (x²)^j (x²+mass1)^l (x²+mass2)^m dx` over `range`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralSpec {
    pub j: i64,
    pub l: i64,
    pub m: i64,
    pub mass1: BigRational,
    pub mass2: BigRational,
    pub range: Range,
}

impl IntegralSpec {
    pub fn new(j: i64, l: i64, m: i64, mass1: BigRational, mass2: BigRational, range: Range) -> Self {
        IntegralSpec { j, l, m, mass1, mass2, range }
    }

    /// Masses 1 and 4, the classic textbook pair.
    pub fn unit_four(j: i64, l: i64, m: i64, range: Range) -> Self {
        let int = |n: i64| BigRational::from_integer(BigInt::from(n));
        IntegralSpec::new(j, l, m, int(1), int(4), range)
    }

    pub fn convergent(&self) -> bool {
        self.j >= 0 && self.l <= 0 && self.m <= 0 && self.j + self.l + self.m <= -1
    }

    fn check(&self) -> Result<(), EngineError> {
        if !self.mass1.is_positive() || !self.mass2.is_positive() {
            return Err(EngineError::InvalidSpec("masses must be positive".into()));
        }
        if !self.convergent() {
            return Err(EngineError::DivergentIntegral);
        }
        Ok(())
    }

    /// Exchanges the two denominator factors.
    pub fn swapped(&self) -> Self {
        IntegralSpec {
            j: self.j,
            l: self.m,
            m: self.l,
            mass1: self.mass2.clone(),
            mass2: self.mass1.clone(),
            range: self.range,
        }
    }
}

/// Integral with first mass scaled to 1 and second mass `rho > 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitMassSpec {
    pub j: i64,
    pub l: i64,
    pub m: i64,
    pub rho: BigRational,
    /// True if the denominators were exchanged to make `rho > 1`.
    pub swapped: bool,
}

/// Substitutes `x = √M₁·u`, giving `M₁^(j+l+m+1/2)` times the unit-mass
/// integral with `ρ = M₂/M₁`. Denominators are exchanged first when
/// `M₂ < M₁`.
pub fn rescale_masses(spec: &IntegralSpec) -> Result<(UnitMassSpec, ExactConst), EngineError> {
    if !spec.mass1.is_positive() || !spec.mass2.is_positive() {
        return Err(EngineError::InvalidSpec("masses must be positive".into()));
    }
    let swap = spec.mass2 < spec.mass1;
    let s = if swap { spec.swapped() } else { spec.clone() };
    let rho = &s.mass2 / &s.mass1;
    let prefactor = ExactConst::rational_pow_half(&s.mass1, 2 * (s.j + s.l + s.m) + 1)?;
    Ok((UnitMassSpec { j: s.j, l: s.l, m: s.m, rho, swapped: swap }, prefactor))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Terms `r`, `c` with argument `1/ρ`.
    Unprimed,
    /// Terms `s`, `b` with argument `ρ`.
    Primed,
    /// Equal masses; a single Γ-ratio.
    SingleDenominator,
}

impl Representation {
    pub fn name(self) -> &'static str {
        match self {
            Representation::Unprimed => "unprimed",
            Representation::Primed => "primed",
            Representation::SingleDenominator => "single-denominator",
        }
    }
}

/// One basis term's contribution, already scaled to the requested integral.
#[derive(Debug, Clone, PartialEq)]
pub struct TermValue {
    pub label: String,
    pub exact: ExactConst,
    pub float: f64,
    /// `None` when the coefficient vanished and the ₂F₁ was never evaluated.
    pub strategy: Option<Strategy>,
    /// True when the coefficient is a Pochhammer zero (a `1/Γ(0)` factor).
    pub vanished: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationCheck {
    pub unprimed: ExactSum,
    pub primed: ExactSum,
    pub unprimed_terms: Vec<TermValue>,
    pub primed_terms: Vec<TermValue>,
}

impl RepresentationCheck {
    pub fn agree(&self) -> bool {
        self.unprimed == self.primed
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub spec: IntegralSpec,
    pub exact: ExactSum,
    pub float_value: f64,
    /// Terms of the reported representation.
    pub terms: Vec<TermValue>,
    pub representation: Representation,
    /// `None` for the equal-mass route.
    pub crosscheck: Option<RepresentationCheck>,
}

/// Basis templates for a fixed mass ratio, continued and grouped.
#[derive(Debug, Clone)]
pub struct NdimPipeline {
    rho: BigRational,
    representations: Representations,
    singular: Vec<SingularChoice>,
}

impl NdimPipeline {
    pub fn new(rho: &BigRational) -> Result<Self, EngineError> {
        if !rho.is_positive() || rho.is_one() {
            return Err(EngineError::InvalidSpec(format!("mass ratio {rho} must be positive and ≠ 1")));
        }
        let (sys, _) = build_constraints();
        let (solutions, singular) = enumerate_solutions(&sys);
        let terms = solutions
            .iter()
            .map(|s| assemble_term(s, rho).and_then(|t| analytic_continue_term(&t)))
            .collect::<Result<Vec<_>, _>>()?;
        let representations = group_representations(&terms, rho)?;
        Ok(NdimPipeline { rho: rho.clone(), representations, singular })
    }

    pub fn representations(&self) -> &Representations {
        &self.representations
    }

    pub fn singular_choices(&self) -> &[SingularChoice] {
        &self.singular
    }

    /// Exact value of each term at `(j, l, m)`, before mass prefactor and range.
    fn evaluate_terms(&self, terms: &[NdimTerm; 2], j: i64, l: i64, m: i64) -> Result<Vec<RawTerm>, EngineError> {
        terms
            .iter()
            .map(|t| {
                let coeff = match t.coefficient.instantiate(j, l, m, &self.rho)? {
                    Marked::Value(v) => v,
                    Marked::Zero => {
                        return Ok(RawTerm {
                            label: t.label,
                            value: ExactConst::zero(),
                            strategy: None,
                            vanished: true,
                        })
                    }
                    Marked::Pole => return Err(EngineError::PoleInCoefficient(t.label.to_string())),
                };
                if !coeff.is_real() {
                    return Err(EngineError::PhaseResidue(format!("term {} at ({j}, {l}, {m})", t.label)));
                }
                let hyp = t.hyp.instantiate(j, l, m)?;
                let e = eval_2f1(&hyp, EvalMode::ExactOnly, 0.0)?;
                let h = e.value.exact().ok_or(HypError::NotExactlyRepresentable)?;
                Ok(RawTerm { label: t.label, value: coeff * h, strategy: Some(e.strategy), vanished: false })
            })
            .collect()
    }
}

struct RawTerm {
    label: Index,
    value: ExactConst,
    strategy: Option<Strategy>,
    vanished: bool,
}

fn scale_terms(raw: Vec<RawTerm>, scale: &ExactConst) -> Vec<TermValue> {
    raw.into_iter()
        .map(|r| {
            let exact = &r.value * scale;
            TermValue {
                label: r.label.to_string(),
                float: exact.to_f64().unwrap_or(f64::NAN),
                exact,
                strategy: r.strategy,
                vanished: r.vanished,
            }
        })
        .collect()
}

fn total(terms: &[TermValue]) -> ExactSum {
    ExactSum::from_terms(terms.iter().map(|t| t.exact.clone()))
}

/// Evaluates the integral exactly through both representations and checks
/// they agree. The reported representation is the one with argument `1/ρ`.
pub fn evaluate_integral(spec: &IntegralSpec) -> Result<EvalResult, EngineError> {
    spec.check()?;
    if spec.mass1 == spec.mass2 {
        let v = single_denominator_moment(spec.j, spec.l + spec.m, &spec.mass1, spec.range)?;
        let term = TermValue {
            label: "single".into(),
            float: v.to_f64().unwrap_or(f64::NAN),
            exact: v.clone(),
            strategy: None,
            vanished: false,
        };
        return Ok(EvalResult {
            spec: spec.clone(),
            float_value: term.float,
            exact: v.into(),
            terms: vec![term],
            representation: Representation::SingleDenominator,
            crosscheck: None,
        });
    }

    let (unit, prefactor) = rescale_masses(spec)?;
    let scale = prefactor * spec.range.factor();
    let pipeline = NdimPipeline::new(&unit.rho)?;
    let reps = pipeline.representations();
    let unprimed_terms = scale_terms(pipeline.evaluate_terms(&reps.unprimed, unit.j, unit.l, unit.m)?, &scale);
    let primed_terms = scale_terms(pipeline.evaluate_terms(&reps.primed, unit.j, unit.l, unit.m)?, &scale);
    let unprimed = total(&unprimed_terms);
    let primed = total(&primed_terms);
    if unprimed != primed {
        return Err(EngineError::RepresentationMismatch { unprimed, primed });
    }
    if !unprimed.is_real() {
        return Err(EngineError::PhaseResidue("final value is not real".into()));
    }
    Ok(EvalResult {
        spec: spec.clone(),
        float_value: unprimed.to_f64().unwrap_or(f64::NAN),
        exact: unprimed.clone(),
        terms: unprimed_terms.clone(),
        representation: Representation::Unprimed,
        crosscheck: Some(RepresentationCheck { unprimed, primed, unprimed_terms, primed_terms }),
    })
}

/// `∫ dx (x²+M)^n = √π (−n)_(−1/2) M^(n+1/2)` (full line), for `n ≤ −1`.
pub fn evaluate_single_denominator(n: i64, mass: &BigRational, range: Range) -> Result<ExactConst, EngineError> {
    single_denominator_moment(0, n, mass, range)
}

/// `∫ dx (x²)^j (x²+M)^n = √π (1/2)_j (−n)_(−j−1/2) M^(j+n+1/2)` (full line).
///
/// The one-mass generating function leaves no free summation index, so the
/// continued result is a single Γ-ratio.
pub fn single_denominator_moment(j: i64, n: i64, mass: &BigRational, range: Range) -> Result<ExactConst, EngineError> {
    if !mass.is_positive() {
        return Err(EngineError::InvalidSpec("mass must be positive".into()));
    }
    if j < 0 || n > 0 || j + n > -1 {
        return Err(EngineError::DivergentIntegral);
    }
    let first = pochhammer(HalfInt::HALF, HalfInt::int(j));
    let second = pochhammer(HalfInt::int(-n), HalfInt::half_odd(-j - 1));
    let (Marked::Value(first), Marked::Value(second)) = (first, second) else {
        return Err(EngineError::PoleInCoefficient("single".into()));
    };
    let scale = ExactConst::rational_pow_half(mass, 2 * (j + n) + 1)?;
    Ok(ExactConst::pi_pow_half(1) * first * second * scale * range.factor())
}

impl fmt::Display for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
