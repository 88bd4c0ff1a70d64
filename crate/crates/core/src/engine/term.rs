use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::system::{Index, SeriesSolution};
use super::EngineError;
use crate::affine::AffineForm;
use crate::exact::{pochhammer, ExactConst, HalfInt, Marked};
use crate::hypergeom::HypTemplate;

/// `(base)_offset` raised to `power ∈ {+1, −1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PochFactor {
    pub base: AffineForm,
    pub offset: AffineForm,
    pub power: i8,
}

/// `e^{iπ·phase} · π^(1/2) · ρ^(rho_power) · ∏ factors`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoefficientTemplate {
    pub phase: AffineForm,
    pub rho_power: AffineForm,
    pub factors: Vec<PochFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NdimTerm {
    pub label: Index,
    pub coefficient: CoefficientTemplate,
    pub hyp: HypTemplate,
    /// True once the Pochhammer factors have been continued to negative exponents.
    pub continued: bool,
}

impl CoefficientTemplate {
    /// Evaluates at concrete exponents. Poles win over zeros.
    pub fn instantiate(&self, j: i64, l: i64, m: i64, rho: &BigRational) -> Result<Marked, EngineError> {
        let phase = self.phase.instantiate(j, l, m, 0);
        let mut value = ExactConst::phase(phase.twice()) * ExactConst::pi_pow_half(1);
        value = value * ExactConst::rational_pow_half(rho, self.rho_power.instantiate(j, l, m, 0).twice())?;
        let (mut zero, mut pole) = (false, false);
        for f in &self.factors {
            let p = pochhammer(f.base.instantiate(j, l, m, 0), f.offset.instantiate(j, l, m, 0));
            match (p, f.power > 0) {
                (Marked::Value(v), true) => value = value * v,
                (Marked::Value(v), false) => value = value.div(&v)?,
                (Marked::Zero, true) | (Marked::Pole, false) => zero = true,
                (Marked::Zero, false) | (Marked::Pole, true) => pole = true,
            }
        }
        Ok(if pole {
            Marked::Pole
        } else if zero {
            Marked::Zero
        } else {
            Marked::Value(value)
        })
    }
}

impl fmt::Display for CoefficientTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.phase.as_constant() {
            Some(p) if p == HalfInt::ZERO => write!(f, "pi^(1/2)")?,
            Some(p) if p == HalfInt::HALF => write!(f, "(-pi)^(1/2)")?,
            _ => write!(f, "(-1)^({}) pi^(1/2)", self.phase)?,
        }
        if self.rho_power != AffineForm::default() {
            write!(f, " rho^({})", self.rho_power)?;
        }
        for p in &self.factors {
            let sep = if p.power > 0 { " * " } else { " / " };
            write!(f, "{sep}({})_({})", p.base, p.offset)?;
        }
        Ok(())
    }
}

fn one() -> AffineForm {
    AffineForm::constant(HalfInt::ONE)
}

/// Pairs every remaining denominator Γ(u) with a numerator Γ(v) as
/// `1/(v)_(u−v)`, choosing the pairing with the lightest offsets.
fn pair_gammas(numer: &[AffineForm], denom: &[AffineForm]) -> Result<Vec<PochFactor>, EngineError> {
    if numer.len() != denom.len() {
        return Err(EngineError::NotHypergeometric(format!(
            "{} numerator Γ against {} denominator Γ",
            numer.len(),
            denom.len()
        )));
    }
    let mut best: Option<(i64, Vec<usize>)> = None;
    for perm in permutations(numer.len()) {
        let w: i64 = perm.iter().enumerate().map(|(d, &n)| (denom[d] - numer[n]).weight()).sum();
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, perm));
        }
    }
    let (_, perm) = best.expect("at least the empty permutation");
    let mut factors: Vec<PochFactor> = perm
        .iter()
        .enumerate()
        .map(|(d, &n)| PochFactor { base: numer[n], offset: denom[d] - numer[n], power: -1 })
        .collect();
    factors.sort_by_key(|f| (f.base.weight(), f.base.constant));
    Ok(factors)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Rearranges the constrained series into a Pochhammer coefficient times ₂F₁.
///
/// The generating function contributes
/// `(−1)^(−j−l−m) j! l! m! √π Γ(1/2) Σ (−1)^(r+s) ρ^s / (a! b! c! r! s!)`.
/// Each bound factorial `(x₀ ± t)!` splits into `Γ(x₀+1)` times a Pochhammer
/// in `t`: `+t` gives a lower parameter `x₀+1`, `−t` an upper parameter
/// `−x₀` and a sign `(−1)^t`.
pub fn assemble_term(sol: &SeriesSolution, rho: &BigRational) -> Result<NdimTerm, EngineError> {
    let mut numer = vec![
        AffineForm::constant(HalfInt::HALF),
        AffineForm::j() + one(),
        AffineForm::l() + one(),
        AffineForm::m() + one(),
    ];
    let mut denom = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut flips = 0i64;
    for (idx, form) in &sol.assignment {
        let x0 = form.without_free();
        denom.push(x0 + one());
        match form.coeff_free {
            0 => {}
            1 => lower.push(x0 + one()),
            -1 => {
                upper.push(-x0);
                flips += 1;
            }
            k => {
                return Err(EngineError::NotHypergeometric(format!(
                    "{idx} depends on the free index with coefficient {k}"
                )))
            }
        }
    }
    if upper.len() != 2 || lower.len() != 1 {
        return Err(EngineError::NotHypergeometric(format!(
            "{} upper and {} lower parameters",
            upper.len(),
            lower.len()
        )));
    }

    let r_plus_s = sol.get(Index::R) + sol.get(Index::S);
    let s = sol.get(Index::S);
    let z_sign_odd = (r_plus_s.coeff_free + flips).rem_euclid(2) == 1;
    let mut z = match s.coeff_free {
        1 => rho.clone(),
        -1 => rho.recip(),
        k => return Err(EngineError::NotHypergeometric(format!("mass index advances by {k} per term"))),
    };
    if z_sign_odd {
        z = -z;
    }

    // cancel Γ's common to numerator and denominator
    numer.retain(|n| match denom.iter().position(|d| d == n) {
        Some(i) => {
            denom.remove(i);
            false
        }
        None => true,
    });
    let factors = pair_gammas(&numer, &denom)?;
    let phase = r_plus_s.without_free() - (AffineForm::j() + AffineForm::l() + AffineForm::m());

    Ok(NdimTerm {
        label: sol.free,
        coefficient: CoefficientTemplate { phase, rho_power: s.without_free(), factors },
        hyp: HypTemplate { a: upper[0], b: upper[1], c: lower[0], z },
        continued: false,
    })
}

/// Continues every Pochhammer factor through `(a)_K = e^{iπK} / (1−a)_(−K)`
/// (so `1/(a)_K = e^{−iπK} (1−a)_(−K)`); the phase must end up real.
pub fn analytic_continue_term(t: &NdimTerm) -> Result<NdimTerm, EngineError> {
    if t.continued {
        return Err(EngineError::AlreadyContinued(t.label));
    }
    let mut phase = t.coefficient.phase;
    let factors = t
        .coefficient
        .factors
        .iter()
        .map(|f| {
            phase = if f.power > 0 { phase + f.offset } else { phase - f.offset };
            PochFactor { base: one() - f.base, offset: -f.offset, power: -f.power }
        })
        .collect();
    if !phase.constant.is_integer() {
        return Err(EngineError::PhaseResidue(format!("term {}: phase (-1)^({phase})", t.label)));
    }
    Ok(NdimTerm {
        label: t.label,
        coefficient: CoefficientTemplate { phase, rho_power: t.coefficient.rho_power, factors },
        hyp: t.hyp.clone(),
        continued: true,
    })
}

/// The two complete expressions for the integral, keyed by the ₂F₁ argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representations {
    /// Argument `1/ρ`: terms `r` then `c`.
    pub unprimed: [NdimTerm; 2],
    /// Argument `ρ`: terms `s` then `b`.
    pub primed: [NdimTerm; 2],
}

pub fn group_representations(terms: &[NdimTerm], rho: &BigRational) -> Result<Representations, EngineError> {
    if terms.len() != 4 {
        return Err(EngineError::NotHypergeometric(format!("expected 4 basis terms, got {}", terms.len())));
    }
    let inv = rho.recip();
    let pick = |z: &BigRational, order: [Index; 2]| -> Result<[NdimTerm; 2], EngineError> {
        let group: Vec<&NdimTerm> = terms.iter().filter(|t| &t.hyp.z == z).collect();
        let find = |label| {
            group
                .iter()
                .find(|t| t.label == label)
                .map(|t| (*t).clone())
                .ok_or_else(|| EngineError::NotHypergeometric(format!("no term {label} at argument {z}")))
        };
        if group.len() != 2 {
            return Err(EngineError::NotHypergeometric(format!("{} terms at argument {z}", group.len())));
        }
        Ok([find(order[0])?, find(order[1])?])
    };
    if rho.is_one() {
        return Err(EngineError::InvalidSpec("equal masses have a single representation".into()));
    }
    Ok(Representations { unprimed: pick(&inv, [Index::R, Index::C])?, primed: pick(rho, [Index::S, Index::B])? })
}

#[cfg(test)]
mod tests {
    use super::super::system::{build_constraints, solve};
    use super::*;
    use num_bigint::BigInt;

    fn h(twice: i64) -> HalfInt {
        HalfInt::from_twice(twice)
    }

    fn affine(c: i64, j: i64, l: i64, m: i64) -> AffineForm {
        AffineForm::new(h(c), j, l, m, 0)
    }

    fn four() -> BigRational {
        BigRational::from_integer(BigInt::from(4))
    }

    fn term(free: Index) -> NdimTerm {
        let (sys, _) = build_constraints();
        assemble_term(&solve(&sys, free).unwrap(), &four()).unwrap()
    }

    fn has_factor(c: &CoefficientTemplate, base: AffineForm, offset: AffineForm, power: i8) -> bool {
        c.factors.contains(&PochFactor { base, offset, power })
    }

    #[test]
    fn free_r_gives_coefficient_a() {
        let t = term(Index::R);
        assert_eq!(t.coefficient.phase, AffineForm::constant(HalfInt::HALF));
        assert_eq!(t.coefficient.rho_power, affine(1, 1, 1, 1));
        assert_eq!(t.coefficient.factors.len(), 2);
        assert!(has_factor(&t.coefficient, affine(1, 0, 0, 0), affine(0, -1, -1, 0), -1));
        assert!(has_factor(&t.coefficient, affine(2, 0, 0, 1), affine(1, 1, 1, 0), -1));
        let want = HypTemplate {
            a: affine(0, 0, -1, 0),
            b: affine(-1, -1, -1, -1),
            c: affine(1, -1, -1, 0),
            z: four().recip(),
        };
        assert_eq!(t.hyp, want);
    }

    #[test]
    fn free_s_gives_coefficient_a_prime() {
        let t = term(Index::S);
        assert_eq!(t.coefficient.rho_power, AffineForm::default());
        assert!(has_factor(&t.coefficient, affine(1, 0, 0, 0), affine(0, -1, 0, -1), -1));
        assert!(has_factor(&t.coefficient, affine(2, 0, 1, 0), affine(1, 1, 0, 1), -1));
        assert_eq!(t.hyp.a, affine(0, 0, 0, -1));
        assert_eq!(t.hyp.b, affine(-1, -1, -1, -1));
        assert_eq!(t.hyp.c, affine(1, -1, 0, -1));
        assert_eq!(t.hyp.z, four());
    }

    #[test]
    fn free_b_gives_coefficient_b_prime() {
        let t = term(Index::B);
        assert_eq!(t.coefficient.rho_power, affine(1, 1, 0, 1));
        assert!(has_factor(&t.coefficient, affine(1, 0, 0, 0), affine(0, -1, 0, 0), -1));
        assert!(has_factor(&t.coefficient, affine(2, 0, 0, 1), affine(1, 1, 0, 0), -1));
        assert_eq!((t.hyp.a, t.hyp.b, t.hyp.c), (affine(1, 1, 0, 0), affine(0, 0, -1, 0), affine(3, 1, 0, 1)));
        assert_eq!(t.hyp.z, four());
    }

    #[test]
    fn free_c_gives_coefficient_b() {
        let t = term(Index::C);
        assert_eq!(t.coefficient.rho_power, AffineForm::m());
        assert!(has_factor(&t.coefficient, affine(1, 0, 0, 0), affine(0, -1, 0, 0), -1));
        assert!(has_factor(&t.coefficient, affine(2, 0, 1, 0), affine(1, 1, 0, 0), -1));
        assert_eq!((t.hyp.a, t.hyp.b, t.hyp.c), (affine(1, 1, 0, 0), affine(0, 0, 0, -1), affine(3, 1, 1, 0)));
        assert_eq!(t.hyp.z, four().recip());
    }

    #[test]
    fn continuation_of_a_and_b_prime() {
        let a = analytic_continue_term(&term(Index::R)).unwrap();
        assert_eq!(a.coefficient.phase, AffineForm::default());
        assert!(has_factor(&a.coefficient, affine(1, 0, 0, 0), affine(0, 1, 1, 0), 1));
        assert!(has_factor(&a.coefficient, affine(0, 0, 0, -1), affine(-1, -1, -1, 0), 1));

        let bp = analytic_continue_term(&term(Index::B)).unwrap();
        assert_eq!(bp.coefficient.to_string(), "pi^(1/2) rho^(j+m+1/2) * (1/2)_(j) * (-m)_(-j-1/2)");
        assert!(matches!(analytic_continue_term(&bp), Err(EngineError::AlreadyContinued(Index::B))));
    }

    #[test]
    fn continued_a_at_the_worked_example() {
        let a = analytic_continue_term(&term(Index::R)).unwrap();
        // ρ^(−1/2) (1/2)_0 (1)_(−1/2) √π = (1/2)·√π·√π
        let v = a.coefficient.instantiate(1, -1, -1, &four()).unwrap();
        assert_eq!(v, Marked::Value(ExactConst::ratio(1, 2) * ExactConst::pi_pow_half(2)));
    }

    #[test]
    fn residual_phase_is_rejected() {
        let mut t = term(Index::R);
        t.coefficient.factors.pop();
        assert!(matches!(analytic_continue_term(&t), Err(EngineError::PhaseResidue(_))));
    }

    #[test]
    fn grouping_by_argument() {
        let terms: Vec<NdimTerm> = [Index::B, Index::C, Index::R, Index::S].into_iter().map(term).collect();
        let reps = group_representations(&terms, &four()).unwrap();
        assert_eq!(reps.unprimed[0].label, Index::R);
        assert_eq!(reps.unprimed[1].label, Index::C);
        assert_eq!(reps.primed[0].label, Index::S);
        assert_eq!(reps.primed[1].label, Index::B);
        assert!(reps.unprimed.iter().all(|t| t.hyp.z == four().recip()));
        assert!(reps.primed.iter().all(|t| t.hyp.z == four()));
    }
}
