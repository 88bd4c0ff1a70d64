use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::affine::AffineForm;
use crate::exact::HalfInt;

/// Summation indices of the two-mass generating functional: `a` pairs with
/// `α` (numerator), `b`, `c` come from the multinomial and `r`, `s` from the
/// two exponential mass factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Index {
    A,
    B,
    C,
    R,
    S,
}

impl Index {
    pub const ALL: [Index; 5] = [Index::A, Index::B, Index::C, Index::R, Index::S];

    pub fn position(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Index::A => "a",
            Index::B => "b",
            Index::C => "c",
            Index::R => "r",
            Index::S => "s",
        }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The series-matching conditions
/// `j = a`, `l = b + r`, `m = c + s`, `a + b + c = −1/2`
/// as integer rows over `(a, b, c, r, s)` with affine right-hand sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSystem {
    pub rows: [[i64; 5]; 4],
    pub rhs: [AffineForm; 4],
}

/// How many summation indices survive series matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexCount {
    pub summation_indices: usize,
    pub external_exponents: usize,
    pub constraints: usize,
}

impl IndexCount {
    pub fn remaining(&self) -> usize {
        self.summation_indices - self.external_exponents - self.constraints
    }

    /// Number of ways to pick the surviving index, C(5, 4) = 5.
    pub fn candidate_choices(&self) -> usize {
        let n = self.summation_indices;
        let k = self.summation_indices - self.remaining();
        binomial(n, k)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn build_constraints() -> (IndexSystem, IndexCount) {
    let sys = IndexSystem {
        rows: [[1, 0, 0, 0, 0], [0, 1, 0, 1, 0], [0, 0, 1, 0, 1], [1, 1, 1, 0, 0]],
        rhs: [AffineForm::j(), AffineForm::l(), AffineForm::m(), AffineForm::constant(HalfInt::from_twice(-1))],
    };
    let count = IndexCount { summation_indices: 5, external_exponents: 3, constraints: 1 };
    (sys, count)
}

impl IndexSystem {
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational64>> =
            self.rows.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
        let mut rank = 0;
        for col in 0..5 {
            let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for i in 0..m.len() {
                if i != rank && !m[i][col].is_zero() {
                    let f = m[i][col] / m[rank][col];
                    let pivot_row = m[rank].clone();
                    for (x, v) in m[i].iter_mut().zip(pivot_row) {
                        *x -= f * v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// The four bound indices expressed through `(j, l, m)` and the free index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesSolution {
    pub free: Index,
    pub assignment: Vec<(Index, AffineForm)>,
}

impl SeriesSolution {
    pub fn get(&self, idx: Index) -> AffineForm {
        if idx == self.free {
            return AffineForm::free();
        }
        self.assignment.iter().find(|(i, _)| *i == idx).map(|(_, f)| *f).expect("every bound index is assigned")
    }

    /// `name=form` lines in index order, e.g. `c=-j-l-1/2+r`.
    pub fn describe(&self) -> Vec<String> {
        self.assignment.iter().map(|(i, f)| format!("{}={}", i, f.display_with(self.free.name()))).collect()
    }

    /// Checks every equation holds identically in `(j, l, m, free)`.
    pub fn satisfies(&self, sys: &IndexSystem) -> bool {
        sys.rows.iter().zip(&sys.rhs).all(|(row, rhs)| {
            let lhs =
                Index::ALL.iter().fold(AffineForm::default(), |acc, &i| acc + self.get(i).scale(row[i.position()]));
            lhs == *rhs
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingularChoice {
    pub free: Index,
    pub reason: String,
}

/// Affine vector `[const, j, l, m, free]` with rational entries.
type Vector = [Rational64; 5];

fn to_vector(a: &AffineForm) -> Vector {
    [Rational64::new(a.constant.twice(), 2), a.coeff_j.into(), a.coeff_l.into(), a.coeff_m.into(), a.coeff_free.into()]
}

fn to_affine(v: &Vector) -> Option<AffineForm> {
    let twice = v[0] * Rational64::from_integer(2);
    let int = |x: Rational64| x.is_integer().then(|| x.to_integer());
    Some(AffineForm::new(HalfInt::from_twice(int(twice)?), int(v[1])?, int(v[2])?, int(v[3])?, int(v[4])?))
}

/// Solves the 4×4 system left after fixing `free`, by exact elimination.
pub fn solve(sys: &IndexSystem, free: Index) -> Result<SeriesSolution, SingularChoice> {
    let unknowns: Vec<Index> = Index::ALL.iter().copied().filter(|&i| i != free).collect();
    let mut mat: Vec<Vec<Rational64>> = Vec::with_capacity(4);
    let mut rhs: Vec<Vector> = Vec::with_capacity(4);
    for (row, b) in sys.rows.iter().zip(&sys.rhs) {
        mat.push(unknowns.iter().map(|u| Rational64::from_integer(row[u.position()])).collect());
        let mut v = to_vector(b);
        // move the free column across
        v[4] -= Rational64::from_integer(row[free.position()]);
        rhs.push(v);
    }
    let n = unknowns.len();
    for col in 0..n {
        let Some(p) = (col..n).find(|&i| !mat[i][col].is_zero()) else {
            return Err(SingularChoice {
                free,
                reason: format!("vanishing determinant: no pivot for {}", unknowns[col]),
            });
        };
        mat.swap(col, p);
        rhs.swap(col, p);
        let pivot = mat[col][col];
        mat[col].iter_mut().for_each(|x| *x /= pivot);
        rhs[col].iter_mut().for_each(|x| *x /= pivot);
        for i in 0..n {
            if i == col || mat[i][col].is_zero() {
                continue;
            }
            let f = mat[i][col];
            let (pivot_row, pivot_rhs) = (mat[col].clone(), rhs[col]);
            for (x, v) in mat[i].iter_mut().zip(pivot_row) {
                *x -= f * v;
            }
            for (x, v) in rhs[i].iter_mut().zip(pivot_rhs) {
                *x -= f * v;
            }
        }
    }
    debug_assert!(mat.iter().enumerate().all(|(i, r)| r[i].is_one()));
    let mut assignment = Vec::with_capacity(n);
    for (u, v) in unknowns.iter().zip(&rhs) {
        let form = to_affine(v)
            .ok_or_else(|| SingularChoice { free, reason: format!("{u} is not a half-integer affine form") })?;
        assignment.push((*u, form));
    }
    Ok(SeriesSolution { free, assignment })
}

/// Tries every choice of surviving index; singular choices are reported,
/// not returned.
pub fn enumerate_solutions(sys: &IndexSystem) -> (Vec<SeriesSolution>, Vec<SingularChoice>) {
    let mut ok = Vec::new();
    let mut singular = Vec::new();
    for free in Index::ALL {
        match solve(sys, free) {
            Ok(s) => ok.push(s),
            Err(e) => singular.push(e),
        }
    }
    (ok, singular)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting() {
        let (sys, count) = build_constraints();
        assert_eq!(count.candidate_choices(), 5);
        assert_eq!(count.remaining(), 1);
        assert_eq!(sys.rank(), 4);
    }

    #[test]
    fn only_free_a_is_singular() {
        let (sys, _) = build_constraints();
        let (ok, singular) = enumerate_solutions(&sys);
        assert_eq!(singular.len(), 1);
        assert_eq!(singular[0].free, Index::A);
        let labels: Vec<Index> = ok.iter().map(|s| s.free).collect();
        assert_eq!(labels, vec![Index::B, Index::C, Index::R, Index::S]);
        assert!(ok.iter().all(|s| s.satisfies(&sys)));
    }

    #[test]
    fn free_r_and_free_c_blocks() {
        let (sys, _) = build_constraints();
        let r = solve(&sys, Index::R).unwrap();
        assert_eq!(r.describe(), vec!["a=j", "b=l-r", "c=-j-l-1/2+r", "s=j+l+m+1/2-r"]);
        let c = solve(&sys, Index::C).unwrap();
        assert_eq!(c.describe(), vec!["a=j", "b=-j-1/2-c", "r=j+l+1/2+c", "s=m-c"]);
    }
}
