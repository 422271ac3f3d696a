use thiserror::Error;

/// Errors raised by constructions and solvers in this crate.
///
/// Mathematical failures (a nonzero residual, an identity that does not hold)
/// are reported as data, not as errors.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("degenerate parameters: {0}")]
    Degenerate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("series does not terminate: {0}")]
    NonTerminating(String),
    #[error("pole in lower parameter at term {0}")]
    LowerParameterPole(usize),
    #[error("linear system is inconsistent (row {row})")]
    Inconsistent { row: usize },
    #[error("problem is ill-formed: {0}")]
    IllFormed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
