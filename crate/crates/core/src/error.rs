use thiserror::Error;

/// Errors raised by model validation and the numerical engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("amplitudes are not normalized: |a|²+|b|²+|c|²+|d|² = {norm}")]
    NormViolation { norm: f64 },

    #[error("mixture weights are invalid: {0}")]
    WeightViolation(String),

    #[error("invalid time grid: {0}")]
    GridViolation(String),

    #[error("no closed form for {0}; use the quadrature oracle")]
    UnsupportedAnalytic(String),

    #[error("quadrature did not converge: doubling the panels changed the result by {change:e}")]
    QuadratureNonConverged { change: f64 },

    #[error("density matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    PsdViolation { min_eigenvalue: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
