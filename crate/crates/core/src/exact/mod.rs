//! Exact arithmetic: half-integers, symbolic constants of the form
//! `rational · i^p · π^(q/2) · √r`, Γ at half-integers and Pochhammer
//! symbols with pole markers.

mod constant;
mod gamma;
mod half_int;
mod sum;

use thiserror::Error;

pub use constant::{exact_sum, rational_powi, square_free_split, ExactConst};
pub use gamma::{gamma_half, gaussian_moment, pochhammer, Marked};
pub use half_int::HalfInt;
pub use sum::ExactSum;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("Γ has a pole at {0}")]
    GammaPole(HalfInt),
    #[error("symbolic parts differ; terms cannot be combined into one constant")]
    IncompatibleSymbols,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension must be at least 1")]
    InvalidDimension,
}
