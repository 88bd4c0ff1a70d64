use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{ExactConst, ExactError, HalfInt};

/// Result of a Γ-ratio that may sit on a pole of its numerator or denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Marked {
    Value(ExactConst),
    /// Finite numerator over a Γ pole.
    Zero,
    /// Γ pole over a finite denominator.
    Pole,
}

impl Marked {
    pub fn value(&self) -> Option<&ExactConst> {
        match self {
            Marked::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Marked::Zero => true,
            Marked::Value(v) => v.is_zero(),
            Marked::Pole => false,
        }
    }

    /// Collapses `Zero` to an exact zero; `Pole` stays unrepresentable.
    pub fn finite(&self) -> Option<ExactConst> {
        match self {
            Marked::Value(v) => Some(v.clone()),
            Marked::Zero => Some(ExactConst::zero()),
            Marked::Pole => None,
        }
    }
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Γ at a half-integer.
pub fn gamma_half(h: HalfInt) -> Result<ExactConst, ExactError> {
    if let Some(n) = h.as_integer() {
        if n <= 0 {
            return Err(ExactError::GammaPole(h));
        }
        return Ok(ExactConst::rational(BigRational::from_integer(factorial(n as u64 - 1))));
    }
    // h = k + 1/2
    let k = (h.twice() - 1) / 2;
    let coeff = if k >= 0 {
        let k = k as u64;
        // Γ(k+1/2) = (2k)! / (4^k k!) · √π
        BigRational::new(factorial(2 * k), BigInt::from(4).pow(k as u32) * factorial(k))
    } else {
        let k = (-k) as u64;
        // Γ(1/2−k) = (−4)^k k! / (2k)! · √π
        BigRational::new(BigInt::from(-4).pow(k as u32) * factorial(k), factorial(2 * k))
    };
    Ok(ExactConst::rational(coeff) * ExactConst::pi_pow_half(1))
}

/// `(a)_k = Γ(a+k)/Γ(a)` with the pole conventions of [`Marked`].
///
/// When both Γ's are at poles the offset is necessarily an integer and the
/// ratio is the finite limit `(−1)^(q−p)·p!/q!` for `a = −p`, `a+k = −q`.
pub fn pochhammer(a: HalfInt, k: HalfInt) -> Marked {
    let top = a + k;
    match (a.is_non_positive_integer(), top.is_non_positive_integer()) {
        (false, false) => {
            let num = gamma_half(top).expect("top is not a pole");
            let den = gamma_half(a).expect("base is not a pole");
            Marked::Value(num.div(&den).expect("Γ never vanishes"))
        }
        (true, false) => Marked::Zero,
        (false, true) => Marked::Pole,
        (true, true) => {
            let p = -a.as_integer().expect("pole is integral");
            let q = -top.as_integer().expect("pole is integral");
            let sign = if (q - p).rem_euclid(2) == 0 { 1 } else { -1 };
            let v = BigRational::new(BigInt::from(sign) * factorial(p as u64), factorial(q as u64));
            Marked::Value(ExactConst::rational(v))
        }
    }
}

/// `∫ d^D x (x²)^n = (−1)^(−n) Γ(n+1) π^(D/2) δ(n + D/2)`.
pub fn gaussian_moment(n: HalfInt, dimension: u32) -> Result<Marked, ExactError> {
    if dimension == 0 {
        return Err(ExactError::InvalidDimension);
    }
    let half_d = HalfInt::from_twice(dimension as i64);
    if n + half_d != HalfInt::ZERO {
        return Ok(Marked::Zero);
    }
    let gamma = match gamma_half(n + HalfInt::ONE) {
        Ok(g) => g,
        Err(_) => return Ok(Marked::Pole),
    };
    // (−1)^(−n) = e^{−iπn}
    let phase = ExactConst::phase(-n.twice());
    Ok(Marked::Value(phase * gamma * ExactConst::pi_pow_half(dimension as i32)))
}
