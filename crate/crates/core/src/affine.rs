use std::fmt::{self, Write as _};
use std::ops::{Add, Neg, Sub};

use crate::exact::HalfInt;

/// `constant + j·coeff_j + l·coeff_l + m·coeff_m + t·coeff_free`.
///
/// `j`, `l`, `m` are the exponents of the target integrand and `t` is the
/// surviving summation index of a series solution. Integer coefficients with
/// a half-integer constant means every integer instantiation is a `HalfInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct AffineForm {
    pub constant: HalfInt,
    pub coeff_j: i64,
    pub coeff_l: i64,
    pub coeff_m: i64,
    pub coeff_free: i64,
}

impl AffineForm {
    pub const fn new(constant: HalfInt, coeff_j: i64, coeff_l: i64, coeff_m: i64, coeff_free: i64) -> Self {
        AffineForm { constant, coeff_j, coeff_l, coeff_m, coeff_free }
    }

    pub const fn constant(c: HalfInt) -> Self {
        AffineForm::new(c, 0, 0, 0, 0)
    }

    pub const fn j() -> Self {
        AffineForm::new(HalfInt::ZERO, 1, 0, 0, 0)
    }

    pub const fn l() -> Self {
        AffineForm::new(HalfInt::ZERO, 0, 1, 0, 0)
    }

    pub const fn m() -> Self {
        AffineForm::new(HalfInt::ZERO, 0, 0, 1, 0)
    }

    pub const fn free() -> Self {
        AffineForm::new(HalfInt::ZERO, 0, 0, 0, 1)
    }

    pub fn instantiate(&self, j: i64, l: i64, m: i64, t: i64) -> HalfInt {
        self.constant + HalfInt::int(self.coeff_j * j + self.coeff_l * l + self.coeff_m * m + self.coeff_free * t)
    }

    /// The part independent of the free index.
    pub fn without_free(&self) -> Self {
        AffineForm { coeff_free: 0, ..*self }
    }

    pub fn is_constant(&self) -> bool {
        self.coeff_j == 0 && self.coeff_l == 0 && self.coeff_m == 0 && self.coeff_free == 0
    }

    pub fn as_constant(&self) -> Option<HalfInt> {
        self.is_constant().then_some(self.constant)
    }

    /// Total absolute coefficient weight; a measure of how "busy" a form is.
    pub fn weight(&self) -> i64 {
        self.coeff_j.abs() + self.coeff_l.abs() + self.coeff_m.abs() + self.coeff_free.abs()
    }

    pub fn scale(&self, k: i64) -> Self {
        AffineForm {
            constant: HalfInt::from_twice(self.constant.twice() * k),
            coeff_j: self.coeff_j * k,
            coeff_l: self.coeff_l * k,
            coeff_m: self.coeff_m * k,
            coeff_free: self.coeff_free * k,
        }
    }

    /// Renders with `free` as the name of the summation index, in the order
    /// `j, l, m, constant, free`, e.g. `-j-l-1/2+r`.
    pub fn display_with(&self, free: &str) -> String {
        let mut out = String::new();
        let mut push = |coeff: i64, name: &str| {
            if coeff == 0 {
                return;
            }
            let sign = if coeff < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = coeff.unsigned_abs();
            if mag == 1 {
                let _ = write!(out, "{sign}{name}");
            } else {
                let _ = write!(out, "{sign}{mag}{name}");
            }
        };
        push(self.coeff_j, "j");
        push(self.coeff_l, "l");
        push(self.coeff_m, "m");
        let c = self.constant;
        if c != HalfInt::ZERO {
            let sign = if c < HalfInt::ZERO {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let _ = write!(out, "{sign}{}", c.abs());
        }
        let mut push_free = |coeff: i64| {
            if coeff == 0 {
                return;
            }
            let sign = if coeff < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = coeff.unsigned_abs();
            if mag == 1 {
                let _ = write!(out, "{sign}{free}");
            } else {
                let _ = write!(out, "{sign}{mag}{free}");
            }
        };
        push_free(self.coeff_free);
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(self, r: AffineForm) -> AffineForm {
        AffineForm {
            constant: self.constant + r.constant,
            coeff_j: self.coeff_j + r.coeff_j,
            coeff_l: self.coeff_l + r.coeff_l,
            coeff_m: self.coeff_m + r.coeff_m,
            coeff_free: self.coeff_free + r.coeff_free,
        }
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, r: AffineForm) -> AffineForm {
        self + (-r)
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scale(-1)
    }
}

impl From<HalfInt> for AffineForm {
    fn from(c: HalfInt) -> Self {
        AffineForm::constant(c)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("t"))
    }
}
