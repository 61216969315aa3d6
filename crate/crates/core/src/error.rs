use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while evaluating or auditing a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value {0} is not a probability in [0, 1]")]
    InvalidProbability(f64),

    #[error("matchup ({a}, {b}) is undefined: both teams are perfect or both are winless")]
    UndefinedMatchup { a: f64, b: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("failed to converge: {0}")]
    Convergence(String),

    #[error("trial {trial} exceeded {max_rounds} tied rounds")]
    TieLimitExceeded { trial: u64, max_rounds: u64 },

    #[error("level-curve integration left the open square at a = {a}, b = {b}")]
    Step { a: f64, b: f64 },

    #[error("model `{0}` has no analytic gradient")]
    GradientUnavailable(String),
}

/// Coarse classification used by the CLI exit codes and the C ABI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Domain,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Param(_) => ErrorClass::Usage,
            Error::InvalidProbability(_)
            | Error::UndefinedMatchup { .. }
            | Error::Domain(_)
            | Error::GradientUnavailable(_) => ErrorClass::Domain,
            Error::Convergence(_) | Error::TieLimitExceeded { .. } | Error::Step { .. } => {
                ErrorClass::Numerical
            }
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
