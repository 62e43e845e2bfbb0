use thiserror::Error;

/// Errors raised by evaluation, verification and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("series did not converge after {terms} terms (last estimate {estimate:e}, error bound {abs_err:e})")]
    NonConvergent { terms: usize, estimate: f64, abs_err: f64 },

    #[error("reduced argument {reduced:.6} outside the series window (limit {limit})")]
    OutOfWindow { reduced: f64, limit: f64 },

    #[error("quadrature failed to reach tolerance: value {value:e}, error estimate {abs_err:e} after {subdivisions} subdivisions")]
    QuadratureFailure { value: f64, abs_err: f64, subdivisions: usize },

    #[error("unsupported order: {0}")]
    UnsupportedOrder(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
