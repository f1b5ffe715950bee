use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument {value} outside supported range: {what}")]
    Range { what: &'static str, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge (partial result {partial:e}, error estimate {estimate:e})")]
    Convergence { partial: f64, estimate: f64 },

    #[error("grid does not cover the state: {mass_outside:e} of the mass lies outside")]
    Coverage { mass_outside: f64 },

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("bound not valid for this schedule: {0}")]
    Validity(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("planning error: {0}")]
    Planning(String),

    #[error("undefined: {0}")]
    Undefined(&'static str),

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
