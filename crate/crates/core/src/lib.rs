//! Exact evaluation of `∫ (x²)^j (x²+M₁)^l (x²+M₂)^m dx` by
//! negative-dimensional integration, with independent oracles.

pub mod affine;
pub mod engine;
pub mod exact;
pub mod hypergeom;
pub mod oracles;

pub use engine::{evaluate_integral, EngineError, EvalResult, IntegralSpec, Range};
pub use exact::{ExactConst, ExactSum, HalfInt};
