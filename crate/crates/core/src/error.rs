use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {value} is outside the support [1, inf) of the Pareto family")]
    OutsideSupport { value: f64 },

    #[error("non-finite observation {value}")]
    NonFinite { value: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("statistic needs at least {needed} observations, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("degenerate sample: every observation equals 1, the shape estimate is undefined")]
    DegenerateSample,

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("density is negative at x = {x} (value {value})")]
    NegativeDensity { x: f64, value: f64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("quadrature did not converge (estimated error {error:e})")]
    Quadrature { error: f64 },

    #[error("root bracketing failed for target probability {target}")]
    RootBracket { target: f64 },

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("{0} is not supported for this statistic")]
    Unsupported(&'static str),

    #[error("identity check {name} failed: residual {residual:e}")]
    IdentityCheck { name: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}
