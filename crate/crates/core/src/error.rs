use thiserror::Error;

/// Errors raised by the numerical kernels and the solver pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{function} overflows at {at}")]
    Overflow { function: &'static str, at: f64 },

    #[error("{function} is undefined for argument {at}")]
    Domain { function: &'static str, at: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("point {t} is outside the grid [{base}, {horizon}]")]
    Range { t: i64, base: i64, horizon: i64 },

    #[error("invalid fractional order {0}")]
    Order(f64),

    #[error("exp-power term with power {p} is not integrable at 0")]
    Integrability { p: f64 },

    #[error("branch {branch} is unavailable: {reason}")]
    BranchUnavailable { branch: String, reason: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("invalid evaluation grid: {0}")]
    Grid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
