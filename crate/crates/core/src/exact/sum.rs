use std::ops::Mul;

use super::ExactConst;

/// A formal sum of constants with pairwise distinct symbolic parts.
///
/// Needed whenever two masses are not in a square ratio: e.g.
/// `∫dx/((x²+1)(x²+2)) = π − π/√2` has no single-surd form.
/// Canonical: no zero terms, at most one term per symbolic part, terms
/// ordered by `(i_power, pi_half_power, radicand)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactSum {
    terms: Vec<ExactConst>,
}

impl ExactSum {
    pub fn zero() -> Self {
        ExactSum::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ExactConst>>(terms: I) -> Self {
        let mut s = ExactSum::zero();
        for t in terms {
            s.push(t);
        }
        s
    }

    pub fn push(&mut self, term: ExactConst) {
        if term.is_zero() {
            return;
        }
        match self.terms.binary_search_by(|t| t.symbol_key().cmp(&term.symbol_key())) {
            Ok(idx) => {
                let merged = self.terms[idx].checked_add(&term).expect("binary search matched symbolic parts");
                if merged.is_zero() {
                    self.terms.remove(idx);
                } else {
                    self.terms[idx] = merged;
                }
            }
            Err(idx) => self.terms.insert(idx, term),
        }
    }

    pub fn add_sum(&mut self, other: &ExactSum) {
        for t in &other.terms {
            self.push(t.clone());
        }
    }

    pub fn terms(&self) -> &[ExactConst] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value as a single constant, when it has at most one symbolic part.
    pub fn as_single(&self) -> Option<ExactConst> {
        match self.terms.len() {
            0 => Some(ExactConst::zero()),
            1 => Some(self.terms[0].clone()),
            _ => None,
        }
    }

    pub fn is_real(&self) -> bool {
        self.terms.iter().all(ExactConst::is_real)
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.terms.iter().map(ExactConst::to_f64).sum()
    }

    pub fn scale(&self, factor: &ExactConst) -> ExactSum {
        ExactSum::from_terms(self.terms.iter().map(|t| t * factor))
    }
}

impl From<ExactConst> for ExactSum {
    fn from(c: ExactConst) -> Self {
        ExactSum::from_terms([c])
    }
}

impl Mul<&ExactConst> for &ExactSum {
    type Output = ExactSum;
    fn mul(self, rhs: &ExactConst) -> ExactSum {
        self.scale(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn merges_like_terms_and_drops_zeros() {
        let pi = ExactConst::pi_pow_half(2);
        let r2 = ExactConst::sqrt_rational(&BigRational::from_integer(2.into()));
        let mut s = ExactSum::from_terms([pi.clone(), &pi * &r2]);
        assert_eq!(s.terms().len(), 2);
        s.push(-pi.clone());
        assert_eq!(s.as_single(), Some(&pi * &r2));
        s.push(-(&pi * &r2));
        assert!(s.is_zero());
    }

    #[test]
    fn order_independent() {
        let a = ExactConst::pi_pow_half(2) * ExactConst::ratio(1, 3);
        let b = ExactConst::pi_pow_half(2) * ExactConst::sqrt_rational(&BigRational::from_integer(3.into()));
        let c = ExactConst::pi_pow_half(1);
        let x = ExactSum::from_terms([a.clone(), b.clone(), c.clone()]);
        let y = ExactSum::from_terms([c, a, b]);
        assert_eq!(x, y);
    }
}
