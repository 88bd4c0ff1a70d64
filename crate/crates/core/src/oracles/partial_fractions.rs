use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::OracleError;
use crate::engine::{IntegralSpec, Range};
use crate::exact::{rational_powi, ExactConst, ExactSum};

/// Which denominator a partial fraction belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MassId {
    M1,
    M2,
}

/// `t^j (t+M₁)^l (t+M₂)^m = Σ coefficient / (t+M)^k` with `t = x²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialFractionDecomp {
    pub mass1: BigRational,
    pub mass2: BigRational,
    /// `(mass, k ≥ 1, coefficient)`, sorted, no zero coefficients.
    pub terms: Vec<(MassId, u32, BigRational)>,
    /// Polynomial part in `t`; empty for every convergent spec.
    pub polynomial_part: Vec<BigRational>,
}

impl PartialFractionDecomp {
    pub fn mass(&self, id: MassId) -> &BigRational {
        match id {
            MassId::M1 => &self.mass1,
            MassId::M2 => &self.mass2,
        }
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

/// Splits `1/((t+A)^a (t+B)^b)`, `A ≠ B`, into simple fractions.
fn split_two(a: u32, b: u32, ma: &BigRational, mb: &BigRational) -> Vec<(bool, u32, BigRational)> {
    let delta = mb - ma;
    let mut out = Vec::new();
    for k in 1..=a {
        let n = a + b - k;
        let sign = if (a - k).is_multiple_of(2) { 1 } else { -1 };
        let c = rat(binomial(n - 1, a - k) * sign) / rational_powi(&delta, i64::from(n));
        out.push((true, k, c));
    }
    for k in 1..=b {
        let n = a + b - k;
        let sign = if a.is_multiple_of(2) { 1 } else { -1 };
        let c = rat(binomial(n - 1, b - k) * sign) / rational_powi(&delta, i64::from(n));
        out.push((false, k, c));
    }
    out
}

/// Decomposes the integrand of `spec` over `t = x²`.
///
/// `t^j` is expanded as `((t+M₁) − M₁)^j`; each resulting
/// `(t+M₁)^p (t+M₂)^m` is either a pure power (when `p ≥ 0` it is rewritten
/// around `M₂`) or split by the two-pole formula.
pub fn decompose(spec: &IntegralSpec) -> Result<PartialFractionDecomp, OracleError> {
    if !spec.mass1.is_positive() || !spec.mass2.is_positive() {
        return Err(OracleError::InvalidSpec("masses must be positive".into()));
    }
    if !spec.convergent() {
        return Err(OracleError::DivergentIntegral);
    }
    let (m1, m2) = (&spec.mass1, &spec.mass2);
    let j = spec.j as u32;
    let mut acc: Vec<(MassId, u32, BigRational)> = Vec::new();
    let mut add = |id: MassId, k: u32, c: BigRational| acc.push((id, k, c));

    for i in 0..=j {
        let outer = rat(binomial(j, i)) * rational_powi(&-m1, i64::from(j - i));
        let p = i as i64 + spec.l;
        let n2 = (-spec.m) as u32;
        if m1 == m2 {
            let k = (n2 as i64 - p) as u32;
            add(MassId::M1, k, outer);
        } else if p >= 0 {
            // (t+M₁)^p = Σ C(p,q) (M₁−M₂)^(p−q) (t+M₂)^q, and q < n2 by convergence
            let p = p as u32;
            let d = m1 - m2;
            for q in 0..=p {
                let c = &outer * rat(binomial(p, q)) * rational_powi(&d, i64::from(p - q));
                add(MassId::M2, n2 - q, c);
            }
        } else if n2 == 0 {
            add(MassId::M1, (-p) as u32, outer);
        } else {
            for (first, k, c) in split_two((-p) as u32, n2, m1, m2) {
                add(if first { MassId::M1 } else { MassId::M2 }, k, &outer * c);
            }
        }
    }

    acc.sort_by_key(|x| (x.0, x.1));
    let mut terms: Vec<(MassId, u32, BigRational)> = Vec::new();
    for (id, k, c) in acc {
        match terms.last_mut() {
            Some(last) if last.0 == id && last.1 == k => last.2 += c,
            _ => terms.push((id, k, c)),
        }
    }
    terms.retain(|t| !t.2.is_zero());
    let decomp = PartialFractionDecomp { mass1: m1.clone(), mass2: m2.clone(), terms, polynomial_part: Vec::new() };
    if !recombines(&decomp, spec) {
        return Err(OracleError::RecombinationFailed);
    }
    Ok(decomp)
}

/// Dense polynomial in `t`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<BigRational>);

impl Poly {
    fn one() -> Self {
        Poly(vec![BigRational::one()])
    }

    fn linear(shift: &BigRational) -> Self {
        Poly(vec![shift.clone(), BigRational::one()])
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (k, b) in o.0.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        Poly(out).trim()
    }

    fn pow(&self, n: u32) -> Poly {
        (0..n).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    fn add_scaled(&mut self, o: &Poly, c: &BigRational) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), BigRational::zero());
        }
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a += b * c;
        }
    }

    fn trim(mut self) -> Poly {
        while self.0.len() > 1 && self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }
}

/// Multiplies the decomposition back by the full denominator and compares
/// with the numerator `t^j`, exactly.
fn recombines(d: &PartialFractionDecomp, spec: &IntegralSpec) -> bool {
    let same = d.mass1 == d.mass2;
    let (n1, n2) = if same { ((-spec.l - spec.m) as u32, 0) } else { ((-spec.l) as u32, (-spec.m) as u32) };
    let mut sum = Poly(vec![BigRational::zero()]);
    for (id, k, c) in &d.terms {
        let (e1, e2) = match id {
            MassId::M1 => (n1.checked_sub(*k), Some(n2)),
            MassId::M2 => (Some(n1), n2.checked_sub(*k)),
        };
        let (Some(e1), Some(e2)) = (e1, e2) else { return false };
        let p = Poly::linear(&d.mass1).pow(e1).mul(&Poly::linear(&d.mass2).pow(e2));
        sum.add_scaled(&p, c);
    }
    let mut target = vec![BigRational::zero(); spec.j as usize + 1];
    target[spec.j as usize] = BigRational::one();
    sum.trim() == Poly(target)
}

fn double_factorial(n: i64) -> BigUint {
    let mut out = BigUint::one();
    let mut k = n;
    while k > 1 {
        out *= BigUint::from(k as u64);
        k -= 2;
    }
    out
}

/// `∫_{−∞}^{∞} dx (x²+M)^(−k) = π (2k−3)!! / ((2k−2)!! M^(k−1/2))`, `k ≥ 1`,
/// with `(−1)!! = 0!! = 1`.
pub fn base_integral(k: u32, mass: &BigRational) -> Result<ExactConst, OracleError> {
    if k == 0 {
        return Err(OracleError::DivergentIntegral);
    }
    if !mass.is_positive() {
        return Err(OracleError::InvalidSpec("mass must be positive".into()));
    }
    let k = i64::from(k);
    let num = BigInt::from(double_factorial(2 * k - 3));
    let den = BigInt::from(double_factorial(2 * k - 2));
    let g = num.gcd(&den);
    let ratio = BigRational::new(num / &g, den / g);
    let scale = ExactConst::rational_pow_half(mass, 1 - 2 * k).expect("positive mass");
    Ok(ExactConst::pi_pow_half(2) * ExactConst::rational(ratio) * scale)
}

/// Exact value of `spec` by partial fractions and the base integral.
pub fn closed_form_oracle(spec: &IntegralSpec) -> Result<ExactSum, OracleError> {
    let d = decompose(spec)?;
    let mut out = ExactSum::zero();
    for (id, k, c) in &d.terms {
        out.push(base_integral(*k, d.mass(*id))? * ExactConst::rational(c.clone()));
    }
    if spec.range == Range::Half {
        out = out.scale(&ExactConst::ratio(1, 2));
    }
    Ok(out)
}
