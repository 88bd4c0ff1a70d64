//! Two verifiers independent of the NDIM path: exact partial fractions and
//! adaptive quadrature.

mod partial_fractions;
mod quadrature;

use thiserror::Error;

pub use partial_fractions::{base_integral, closed_form_oracle, decompose, MassId, PartialFractionDecomp};
pub use quadrature::{adaptive_gk15, quad_oracle, MAX_SUBDIVISIONS};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("integral diverges")]
    DivergentIntegral,
    #[error("invalid integral: {0}")]
    InvalidSpec(String),
    #[error("tolerance {0} is below 1e-12")]
    InvalidTolerance(f64),
    #[error("quadrature did not converge within the subdivision limit")]
    NoConvergence,
    #[error("partial fractions do not recombine to the integrand")]
    RecombinationFailed,
}
