//! Gauss ₂F₁ with half-integer parameters and rational argument.
//!
//! Exact evaluation covers three elementary situations (terminating series,
//! `₂F₁(a,b;b|z) = (1−z)^(−a)`, and Euler's transformation onto a
//! terminating series). Everything else falls back to a floating-point
//! series with a rigorous tail bound, or to the `z → 1/z` continuation for
//! `z < −1`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::affine::AffineForm;
use crate::exact::{pochhammer, ExactConst, HalfInt, Marked};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypError {
    #[error("lower parameter {0} is a non-positive integer and the series does not terminate before it")]
    UndefinedLowerParameter(HalfInt),
    #[error("(c)_r vanishes before the series terminates")]
    PoleInC,
    #[error("strategy not applicable: {0}")]
    NotApplicable(&'static str),
    #[error("singular point z = 1")]
    SingularPoint,
    #[error("a − b is an integer; the inverse-argument continuation is logarithmic")]
    DegenerateTransform,
    #[error("series diverges at this argument and no continuation applies")]
    Divergent,
    #[error("no exact evaluation strategy applies")]
    NotExactlyRepresentable,
    #[error("series did not reach the requested tolerance")]
    NoConvergence,
}

/// A concrete ₂F₁(a, b; c | z).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyp2F1 {
    a: HalfInt,
    b: HalfInt,
    c: HalfInt,
    z: BigRational,
}

impl Hyp2F1 {
    pub fn new(a: HalfInt, b: HalfInt, c: HalfInt, z: BigRational) -> Result<Self, HypError> {
        if c.is_non_positive_integer() {
            let cut = [a, b].into_iter().any(|p| p.is_non_positive_integer() && p >= c);
            if !cut {
                return Err(HypError::UndefinedLowerParameter(c));
            }
        }
        Ok(Hyp2F1 { a, b, c, z })
    }

    pub fn a(&self) -> HalfInt {
        self.a
    }
    pub fn b(&self) -> HalfInt {
        self.b
    }
    pub fn c(&self) -> HalfInt {
        self.c
    }
    pub fn z(&self) -> &BigRational {
        &self.z
    }

    /// Smallest `N` with an upper parameter equal to `−N`.
    fn termination_order(&self) -> Option<i64> {
        [self.a, self.b]
            .into_iter()
            .filter(|p| p.is_non_positive_integer())
            .map(|p| -p.as_integer().expect("integer"))
            .min()
    }

    pub fn to_template(&self) -> HypTemplate {
        HypTemplate { a: self.a.into(), b: self.b.into(), c: self.c.into(), z: self.z.clone() }
    }
}

impl fmt::Display for Hyp2F1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2F1({}, {}; {} | {})", self.a, self.b, self.c, self.z)
    }
}

/// ₂F₁ whose parameters are affine in the integrand exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypTemplate {
    pub a: AffineForm,
    pub b: AffineForm,
    pub c: AffineForm,
    pub z: BigRational,
}

impl HypTemplate {
    pub fn instantiate(&self, j: i64, l: i64, m: i64) -> Result<Hyp2F1, HypError> {
        Hyp2F1::new(
            self.a.instantiate(j, l, m, 0),
            self.b.instantiate(j, l, m, 0),
            self.c.instantiate(j, l, m, 0),
            self.z.clone(),
        )
    }

    /// True when `{a, b}` equals `{a′, b′}` and the rest match.
    pub fn same_function(&self, other: &HypTemplate) -> bool {
        self.c == other.c
            && self.z == other.z
            && ((self.a == other.a && self.b == other.b) || (self.a == other.b && self.b == other.a))
    }
}

impl fmt::Display for HypTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2F1({}, {}; {} | {})", self.a, self.b, self.c, self.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Terminating,
    GaussCollapse,
    EulerTerminating,
    DirectSeries,
    InverseArgument,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Terminating => "terminating",
            Strategy::GaussCollapse => "gauss-collapse",
            Strategy::EulerTerminating => "euler-terminating",
            Strategy::DirectSeries => "direct-series",
            Strategy::InverseArgument => "inverse-argument",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HypValue {
    Exact(ExactConst),
    /// `error_bound` covers series truncation and accumulated rounding.
    Numeric {
        value: f64,
        error_bound: f64,
    },
}

impl HypValue {
    pub fn to_f64(&self) -> Option<f64> {
        match self {
            HypValue::Exact(c) => c.to_f64(),
            HypValue::Numeric { value, .. } => Some(*value),
        }
    }

    pub fn exact(&self) -> Option<&ExactConst> {
        match self {
            HypValue::Exact(c) => Some(c),
            HypValue::Numeric { .. } => None,
        }
    }

    fn error_bound(&self) -> f64 {
        match self {
            HypValue::Exact(_) => 0.0,
            HypValue::Numeric { error_bound, .. } => *error_bound,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HypEval {
    pub value: HypValue,
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    /// Fail with `NotExactlyRepresentable` rather than fall back to floats.
    ExactOnly,
    /// Exact strategies first, floating point otherwise.
    Numeric,
}

fn half(h: HalfInt) -> BigRational {
    h.to_rational()
}

/// Σ_{r=0}^{N} (a)_r (b)_r / (c)_r · z^r / r! for an upper parameter `−N`.
pub fn terminating_sum(h: &Hyp2F1) -> Result<BigRational, HypError> {
    let n = h.termination_order().ok_or(HypError::NotApplicable("no non-positive integer upper parameter"))?;
    let (a, b, c) = (half(h.a), half(h.b), half(h.c));
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for r in 0..=n {
        sum += &term;
        if r == n {
            break;
        }
        let rr = BigRational::from_integer(r.into());
        let cr = &c + &rr;
        if cr.is_zero() {
            return Err(HypError::PoleInC);
        }
        term = term * (&a + &rr) * (&b + &rr) / (cr * (&rr + BigRational::one())) * &h.z;
    }
    Ok(sum)
}

/// `₂F₁(a, b; b | z) = (1 − z)^(−a)` (or with `a`, `b` swapped).
pub fn gauss_collapse(h: &Hyp2F1) -> Result<ExactConst, HypError> {
    let cancelled_exponent = if h.b == h.c {
        Some((h.b, -h.a))
    } else if h.a == h.c {
        Some((h.a, -h.b))
    } else {
        None
    };
    let (cancelled, exponent) = cancelled_exponent.ok_or(HypError::NotApplicable("no upper parameter equals c"))?;
    if cancelled.is_non_positive_integer() {
        // (b)_r/(b)_r is 0/0 past r = −b; the series is cut there instead
        return Err(HypError::NotApplicable("cancelled parameter is a non-positive integer"));
    }
    let w = BigRational::one() - &h.z;
    if w.is_zero() && exponent < HalfInt::ZERO {
        return Err(HypError::SingularPoint);
    }
    ExactConst::rational_pow_half(&w, exponent.twice()).map_err(|_| HypError::SingularPoint)
}

/// `₂F₁(a,b;c|z) = (1−z)^(c−a−b) ₂F₁(c−a, c−b; c | z)` when the right-hand
/// series terminates.
pub fn euler_terminating(h: &Hyp2F1) -> Result<ExactConst, HypError> {
    let upper = [h.c - h.a, h.c - h.b];
    if !upper.iter().any(|p| p.is_non_positive_integer()) {
        return Err(HypError::NotApplicable("neither c−a nor c−b is a non-positive integer"));
    }
    let exponent = h.c - h.a - h.b;
    let w = BigRational::one() - &h.z;
    if w.is_negative() && !exponent.is_integer() {
        return Err(HypError::NotApplicable("half-odd power across the branch cut"));
    }
    if w.is_zero() && exponent < HalfInt::ZERO {
        return Err(HypError::SingularPoint);
    }
    let poly = terminating_sum(&Hyp2F1::new(upper[0], upper[1], h.c, h.z.clone())?)?;
    let scale = ExactConst::rational_pow_half(&w, exponent.twice()).map_err(|_| HypError::SingularPoint)?;
    Ok(scale * ExactConst::rational(poly))
}

const MAX_SERIES_TERMS: usize = 200_000;

/// Floating-point series for `|z| < 1`, returning `(value, error_bound)`.
/// `tol` is relative to the value.
///
/// For `r ≥ R > |c|` the term ratio is bounded by
/// `G(R) = |z|(1+|a|/R)(1+|b|/R)/(1−|c|/R)`, decreasing in `R`, so once
/// `G(n) < 1` the tail past term `n` is at most `|t_n| / (1 − G(n))`.
///
/// Parameter shifts `a + r` are exact in binary, so term `k` carries at most
/// `4k` roundings; the sum is compensated. Summation stops early when the
/// tail falls below the rounding floor, in which case the bound may exceed
/// `tol·|value|` but remains valid.
pub fn direct_series(h: &Hyp2F1, tol: f64) -> Result<(f64, f64), HypError> {
    let z = h.z.to_f64().ok_or(HypError::Divergent)?;
    if z.abs() >= 1.0 {
        return Err(HypError::Divergent);
    }
    let (a, b, c) = (h.a.to_f64(), h.b.to_f64(), h.c.to_f64());
    let eps = f64::EPSILON;
    let mut term = 1.0f64;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let (mut sum_abs, mut weighted) = (0.0f64, 0.0f64);
    for n in 0..MAX_SERIES_TERMS {
        // Neumaier summation
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        sum_abs += term.abs();
        weighted += n as f64 * term.abs();
        let r = n as f64;
        let denom = (c + r) * (r + 1.0);
        if denom == 0.0 {
            return Err(HypError::PoleInC);
        }
        term *= (a + r) * (b + r) / denom * z;
        let value = sum + comp;
        let rounding = eps * (4.01 * weighted + 2.0 * value.abs() + 2.0 * (n as f64 + 1.0) * eps * sum_abs);
        if term == 0.0 {
            return Ok((value, rounding));
        }
        let next = r + 1.0;
        if next > c.abs() {
            let g = z.abs() * (1.0 + a.abs() / next) * (1.0 + b.abs() / next) / (1.0 - c.abs() / next);
            if g < 1.0 {
                let tail = term.abs() / (1.0 - g);
                let target = if value == 0.0 { tol } else { tol * value.abs() };
                if tail + rounding <= target || tail <= eps * rounding {
                    return Ok((value, tail + rounding));
                }
            }
        }
    }
    Err(HypError::NoConvergence)
}

/// One term of the inverse-argument continuation:
/// `z^(z_power) / ∏ (base)_(offset) · ₂F₁(hyp)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformTerm {
    pub z_power: AffineForm,
    pub inverse_pochhammers: [(AffineForm, AffineForm); 2],
    pub hyp: HypTemplate,
}

/// ```text
/// ₂F₁(a,b;c|z) = z^(−a) / ((1−b)_a (c)_(−a)) · ₂F₁(a, 1+a−c; 1+a−b | 1/z)
///              + z^(−b) / ((1−a)_b (c)_(−b)) · ₂F₁(b, 1+b−c; 1+b−a | 1/z)
/// ```
/// valid for `|arg(−z)| < π`.
pub fn transform_inverse_z(t: &HypTemplate) -> Result<[TransformTerm; 2], HypError> {
    let diff = t.a - t.b;
    if diff.constant.is_integer() {
        return Err(HypError::DegenerateTransform);
    }
    if t.z.is_zero() {
        return Err(HypError::SingularPoint);
    }
    let one = AffineForm::constant(HalfInt::ONE);
    let inv_z = t.z.recip();
    let term = |p: AffineForm, q: AffineForm| TransformTerm {
        z_power: -p,
        inverse_pochhammers: [(one - q, p), (t.c, -p)],
        hyp: HypTemplate { a: p, b: one + p - t.c, c: one + p - q, z: inv_z.clone() },
    };
    Ok([term(t.a, t.b), term(t.b, t.a)])
}

/// Evaluates the right-hand side of [`transform_inverse_z`] at `z < −1`.
///
/// Numerically the prefactor `z^(−a)/(1−b)_a` is taken through the
/// reflection `1/(1−b)_a → (−1)^(−a) (b)_(−a)`, which turns it into the
/// principal-branch `(−z)^(−a) (b)_(−a)` for negative `z`.
pub fn transform_inverse_z_numeric(h: &Hyp2F1, tol: f64) -> Result<(f64, f64), HypError> {
    let z = h.z.to_f64().ok_or(HypError::Divergent)?;
    if z >= -1.0 {
        return Err(HypError::NotApplicable("inverse-argument evaluation needs z < −1"));
    }
    let terms = transform_inverse_z(&h.to_template())?;
    let mut value = 0.0;
    let mut bound = 0.0;
    for t in &terms {
        let pow = t.z_power.as_constant().expect("concrete template");
        let (b0, k0) = t.inverse_pochhammers[0];
        let (b1, k1) = t.inverse_pochhammers[1];
        let (b0, k0) = (b0.as_constant().unwrap(), k0.as_constant().unwrap());
        let (b1, k1) = (b1.as_constant().unwrap(), k1.as_constant().unwrap());
        let reflected = match pochhammer(HalfInt::ONE - b0, -k0) {
            Marked::Value(v) => v.to_f64().ok_or(HypError::Divergent)?,
            Marked::Zero => continue,
            Marked::Pole => return Err(HypError::DegenerateTransform),
        };
        let lower = match pochhammer(b1, k1) {
            Marked::Value(v) => v.to_f64().ok_or(HypError::Divergent)?,
            Marked::Zero => return Err(HypError::Divergent),
            Marked::Pole => continue,
        };
        let prefactor = (-z).powf(pow.to_f64()) * reflected / lower;
        let inner = t.hyp.instantiate(0, 0, 0)?;
        let inner = eval_2f1(&inner, EvalMode::Numeric, tol)?.value;
        let v = inner.to_f64().ok_or(HypError::Divergent)?;
        value += prefactor * v;
        bound += prefactor.abs() * inner.error_bound() + 4.0 * f64::EPSILON * (prefactor * v).abs();
    }
    Ok((value, bound))
}

/// Strategy cascade: terminating → collapse → Euler → series (`|z| < 1`) →
/// inverse argument (`z < −1`). Exact results are returned whenever one of
/// the first three applies, regardless of `mode`.
pub fn eval_2f1(h: &Hyp2F1, mode: EvalMode, tol: f64) -> Result<HypEval, HypError> {
    let exact = |v: ExactConst, strategy| Ok(HypEval { value: HypValue::Exact(v), strategy });
    if h.termination_order().is_some() {
        return exact(ExactConst::rational(terminating_sum(h)?), Strategy::Terminating);
    }
    match gauss_collapse(h) {
        Ok(v) => return exact(v, Strategy::GaussCollapse),
        Err(HypError::NotApplicable(_)) => {}
        Err(e) => return Err(e),
    }
    match euler_terminating(h) {
        Ok(v) => return exact(v, Strategy::EulerTerminating),
        Err(HypError::NotApplicable(_)) => {}
        Err(e) => return Err(e),
    }
    let z = h.z.to_f64().ok_or(HypError::Divergent)?;
    let numeric = |r: Result<(f64, f64), HypError>, strategy| {
        let (value, error_bound) = r?;
        Ok(HypEval { value: HypValue::Numeric { value, error_bound }, strategy })
    };
    if z.abs() < 1.0 || z < -1.0 {
        if mode == EvalMode::ExactOnly {
            return Err(HypError::NotExactlyRepresentable);
        }
        return if z.abs() < 1.0 {
            numeric(direct_series(h, tol), Strategy::DirectSeries)
        } else {
            numeric(transform_inverse_z_numeric(h, tol), Strategy::InverseArgument)
        };
    }
    Err(HypError::Divergent)
}
