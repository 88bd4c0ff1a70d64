use std::cmp::Ordering;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExactError;

/// `coeff · i^i_power · π^(pi_half_power/2) · √radicand`.
///
/// Canonical form:
/// * `coeff == 0` forces every other field to its neutral value;
/// * `i_power ∈ {0, 1}` (a factor i² is folded into the sign of `coeff`);
/// * `radicand` is a square-free positive integer, `1` meaning no surd.
///
/// Mass surds `√(p/q)` are stored as `√(pq)/q`, so a mass that is the square
/// of a rational never leaves a surd behind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactConst {
    coeff: BigRational,
    i_power: u8,
    pi_half_power: i32,
    radicand: BigUint,
}

impl ExactConst {
    pub fn zero() -> Self {
        ExactConst { coeff: BigRational::zero(), i_power: 0, pi_half_power: 0, radicand: BigUint::one() }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self::from_parts(coeff, 0, 0, BigUint::one())
    }

    /// π^(k/2).
    pub fn pi_pow_half(k: i32) -> Self {
        Self::from_parts(BigRational::one(), 0, k, BigUint::one())
    }

    pub fn imaginary_unit() -> Self {
        Self::from_parts(BigRational::one(), 1, 0, BigUint::one())
    }

    /// `e^{iπ·twice/2}`, i.e. `(−1)^(twice/2)` on the principal branch.
    pub fn phase(twice: i64) -> Self {
        Self::from_parts(BigRational::one(), twice.rem_euclid(4) as u8, 0, BigUint::one())
    }

    /// Builds a canonical value. `radicand` need not be square-free here.
    pub fn from_parts(coeff: BigRational, i_power: u8, pi_half_power: i32, radicand: BigUint) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        assert!(!radicand.is_zero(), "radicand must be positive");
        let (root, free) = square_free_split(&radicand);
        let mut coeff = coeff * BigRational::from_integer(BigInt::from(root));
        let mut i_power = i_power % 4;
        if i_power >= 2 {
            coeff = -coeff;
            i_power -= 2;
        }
        ExactConst { coeff, i_power, pi_half_power, radicand: free }
    }

    /// Principal square root of a rational: `√q`, or `i·√|q|` for `q < 0`.
    pub fn sqrt_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        let i_power = if q.is_negative() { 1 } else { 0 };
        let num = q.numer().magnitude();
        let den = q.denom().magnitude();
        let coeff = BigRational::new(BigInt::one(), BigInt::from(den.clone()));
        Self::from_parts(coeff, i_power, 0, num * den)
    }

    /// `q^(twice/2)` with the principal branch for negative `q`.
    pub fn rational_pow_half(q: &BigRational, twice: i64) -> Result<Self, ExactError> {
        if q.is_zero() {
            return match twice.cmp(&0) {
                Ordering::Greater => Ok(Self::zero()),
                Ordering::Equal => Ok(Self::one()),
                Ordering::Less => Err(ExactError::DivisionByZero),
            };
        }
        let whole = twice.div_euclid(2);
        let odd = twice.rem_euclid(2) == 1;
        let mut out = Self::rational(rational_powi(q, whole));
        if odd {
            out = out * Self::sqrt_rational(q);
        }
        Ok(out)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn i_power(&self) -> u8 {
        self.i_power
    }

    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    /// Square-free radicand; `1` when there is no surd.
    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    /// Surd factors as `(radicand, half_power)`; empty or a single entry.
    pub fn surds(&self) -> Vec<(BigUint, i32)> {
        if self.radicand.is_one() {
            Vec::new()
        } else {
            vec![(self.radicand.clone(), 1)]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.i_power == 0
    }

    /// True if `self` and `other` differ only in the rational coefficient.
    pub fn same_symbols(&self, other: &ExactConst) -> bool {
        self.i_power == other.i_power && self.pi_half_power == other.pi_half_power && self.radicand == other.radicand
    }

    pub(crate) fn symbol_key(&self) -> (u8, i32, &BigUint) {
        (self.i_power, self.pi_half_power, &self.radicand)
    }

    pub fn inv(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        // 1/i = −i and 1/√r = √r / r
        let mut coeff =
            self.coeff.recip() / BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.radicand.clone()));
        if self.i_power == 1 {
            coeff = -coeff;
        }
        Ok(ExactConst {
            coeff,
            i_power: self.i_power,
            pi_half_power: -self.pi_half_power,
            radicand: self.radicand.clone(),
        })
    }

    pub fn div(&self, other: &ExactConst) -> Result<Self, ExactError> {
        Ok(self * &other.inv()?)
    }

    /// Adds coefficients of two values with identical symbolic parts.
    pub fn checked_add(&self, other: &ExactConst) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if !self.same_symbols(other) {
            return Err(ExactError::IncompatibleSymbols);
        }
        Ok(Self::from_parts(&self.coeff + &other.coeff, self.i_power, self.pi_half_power, self.radicand.clone()))
    }

    /// Numeric value of a real constant.
    pub fn to_f64(&self) -> Option<f64> {
        if !self.is_real() {
            return None;
        }
        let c = self.coeff.to_f64()?;
        let pi = std::f64::consts::PI.sqrt().powi(self.pi_half_power);
        let surd = self.radicand.to_f64()?.sqrt();
        Some(c * pi * surd)
    }
}

impl Mul<&ExactConst> for &ExactConst {
    type Output = ExactConst;
    fn mul(self, rhs: &ExactConst) -> ExactConst {
        if self.is_zero() || rhs.is_zero() {
            return ExactConst::zero();
        }
        // √a·√b = g·√(a'b') with g = gcd(a, b); a', b' coprime and square-free
        let g = self.radicand.gcd(&rhs.radicand);
        let radicand = (&self.radicand / &g) * (&rhs.radicand / &g);
        let coeff = &self.coeff * &rhs.coeff * BigRational::from_integer(BigInt::from(g));
        let mut i_power = self.i_power + rhs.i_power;
        let coeff = if i_power >= 2 {
            i_power -= 2;
            -coeff
        } else {
            coeff
        };
        ExactConst { coeff, i_power, pi_half_power: self.pi_half_power + rhs.pi_half_power, radicand }
    }
}

impl Mul for ExactConst {
    type Output = ExactConst;
    fn mul(self, rhs: ExactConst) -> ExactConst {
        &self * &rhs
    }
}

impl Mul<&ExactConst> for ExactConst {
    type Output = ExactConst;
    fn mul(self, rhs: &ExactConst) -> ExactConst {
        &self * rhs
    }
}

impl Neg for ExactConst {
    type Output = ExactConst;
    fn neg(mut self) -> ExactConst {
        self.coeff = -self.coeff;
        self
    }
}

impl Neg for &ExactConst {
    type Output = ExactConst;
    fn neg(self) -> ExactConst {
        -self.clone()
    }
}

/// Sums a list of constants that share (or can share) one symbolic part.
pub fn exact_sum(terms: &[ExactConst]) -> Result<ExactConst, ExactError> {
    terms.iter().try_fold(ExactConst::zero(), |acc, t| acc.checked_add(t))
}

/// `q^n` for any integer `n`. Panics on `0^n` with `n < 0`.
pub fn rational_powi(q: &BigRational, n: i64) -> BigRational {
    let base = if n < 0 { q.recip() } else { q.clone() };
    let mut e = n.unsigned_abs();
    let mut acc = BigRational::one();
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        e >>= 1;
    }
    acc
}

/// Splits `n = root² · free` with `free` square-free.
pub fn square_free_split(n: &BigUint) -> (BigUint, BigUint) {
    let mut root = BigUint::one();
    let mut free = BigUint::one();
    let mut rest = n.clone();
    let mut d = BigUint::from(2u32);
    while &d * &d <= rest {
        let mut count = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        for _ in 0..count / 2 {
            root *= &d;
        }
        if count % 2 == 1 {
            free *= &d;
        }
        d += 1u32;
    }
    free *= rest;
    (root, free)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_is_canonical() {
        let z = ExactConst::from_parts(q(0, 1), 3, 5, BigUint::from(7u32));
        assert_eq!(z, ExactConst::zero());
        let x = ExactConst::pi_pow_half(1) * ExactConst::ratio(3, 2);
        assert_eq!(x.checked_add(&-x.clone()).unwrap(), ExactConst::zero());
    }

    #[test]
    fn square_masses_fold_into_coefficient() {
        assert_eq!(ExactConst::sqrt_rational(&q(4, 1)), ExactConst::int(2));
        assert_eq!(ExactConst::sqrt_rational(&q(25, 4)), ExactConst::ratio(5, 2));
        let s = ExactConst::sqrt_rational(&q(1, 2));
        assert_eq!(s.coeff(), &q(1, 2));
        assert_eq!(s.radicand(), &BigUint::from(2u32));
        assert_eq!(ExactConst::rational_pow_half(&q(4, 1), -3).unwrap(), ExactConst::ratio(1, 8));
    }

    #[test]
    fn surds_multiply_through_gcd() {
        let s6 = ExactConst::sqrt_rational(&q(6, 1));
        let s10 = ExactConst::sqrt_rational(&q(10, 1));
        let p = &s6 * &s10;
        // √60 = 2√15
        assert_eq!(p.coeff(), &q(2, 1));
        assert_eq!(p.radicand(), &BigUint::from(15u32));
        assert_eq!(&s6 * &s6, ExactConst::int(6));
    }

    #[test]
    fn imaginary_powers_fold() {
        let i = ExactConst::imaginary_unit();
        assert_eq!(&i * &i, ExactConst::int(-1));
        assert_eq!(ExactConst::phase(3), -ExactConst::imaginary_unit());
        assert_eq!(ExactConst::phase(-2), ExactConst::int(-1));
        assert_eq!(i.inv().unwrap(), -i.clone());
        assert!(!i.is_real());
        assert_eq!(ExactConst::sqrt_rational(&q(-9, 1)), ExactConst::imaginary_unit() * ExactConst::int(3));
    }

    #[test]
    fn inverse_round_trips() {
        let x = ExactConst::from_parts(q(-3, 7), 1, 3, BigUint::from(5u32));
        assert_eq!(&x * &x.inv().unwrap(), ExactConst::one());
        assert!(ExactConst::zero().inv().is_err());
    }

    #[test]
    fn exact_sum_examples() {
        let pi = ExactConst::pi_pow_half(2);
        let third = &pi * &ExactConst::ratio(-1, 3);
        let two_thirds = &pi * &ExactConst::ratio(2, 3);
        assert_eq!(exact_sum(&[third, two_thirds]).unwrap(), &pi * &ExactConst::ratio(1, 3));
        assert_eq!(
            exact_sum(&[ExactConst::pi_pow_half(1), ExactConst::pi_pow_half(2)]),
            Err(ExactError::IncompatibleSymbols)
        );
        assert_eq!(exact_sum(&[]).unwrap(), ExactConst::zero());
    }

    #[test]
    fn square_free_split_small() {
        let (r, f) = square_free_split(&BigUint::from(72u32));
        assert_eq!((r, f), (BigUint::from(6u32), BigUint::from(2u32)));
        let (r, f) = square_free_split(&BigUint::from(1u32));
        assert_eq!((r, f), (BigUint::from(1u32), BigUint::from(1u32)));
    }

    #[test]
    fn float_value() {
        let x = ExactConst::pi_pow_half(2) * ExactConst::sqrt_rational(&q(2, 1)) * ExactConst::ratio(1, 4);
        assert!((x.to_f64().unwrap() - std::f64::consts::PI * 2f64.sqrt() / 4.0).abs() < 1e-15);
        assert_eq!(ExactConst::imaginary_unit().to_f64(), None);
    }
}
