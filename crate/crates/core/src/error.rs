use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message} (expected one of: {})", expected.join(", "))]
    Parse {
        offset: usize,
        expected: Vec<String>,
        message: String,
    },
    #[error("horizon exceeded: requested {requested}, available {available}")]
    HorizonExceeded { requested: u64, available: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("set is not stationary for the filter: {0}")]
    NotStationary(String),
    #[error("dimension mismatch: expected at least {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no convergence after {iterations} iterations, bracket [{lo}, {hi}]")]
    ConvergenceFailure { iterations: usize, lo: f64, hi: f64 },
    #[error("series of reciprocals converges: {0}")]
    NotDivergent(String),
    #[error("not separable: {0}")]
    NotSeparable(String),
    #[error("boundedness criterion holds, no witness exists")]
    CriterionHolds,
    #[error("target sequence is not admissible, witness {witness}")]
    NotAdmissible { witness: String },
    #[error("invalid specification: {0}")]
    Invalid(String),
}

impl Error {
    pub(crate) fn parse(offset: usize, expected: &[&str], message: impl Into<String>) -> Self {
        Error::Parse {
            offset,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: message.into(),
        }
    }
}
