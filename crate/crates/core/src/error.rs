use thiserror::Error;

/// Errors raised by the numerical engine.
///
/// Every operation validates its inputs before computing, so a returned
/// error always names the precondition or the numerical step that failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFiniteInput(String),
    #[error("sample weights must be positive and sum to 1 (sum = {sum})")]
    BadWeights { sum: f64 },
    #[error("invalid step function: {0}")]
    BadSteps(String),
    #[error("invalid function model: {0}")]
    BadModel(String),
    #[error("invalid interval [{a}, {b}]")]
    BadInterval { a: f64, b: f64 },
    #[error("point {0} outside (0, 1]")]
    BadPoint(f64),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("bad exponent: {0}")]
    BadExponent(String),
    #[error("quadrature did not reach the requested tolerance on [{a}, {b}]")]
    NoConvergence { a: f64, b: f64 },
    #[error("integral diverges: {0}")]
    Divergent(String),
    #[error("non-finite value {value} at t = {t}")]
    NonFiniteValue { t: f64, value: f64 },
    #[error("value {y} outside the range of the monotone map")]
    OutOfRange { y: f64 },
    #[error("no trial decomposition has both norms finite")]
    InfiniteNorm,
    #[error("condition {0} failed")]
    ConditionCheckFailed(String),
    #[error("GGamma condition c2 failed: {0}")]
    ConditionC2Failed(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("function is not nonincreasing")]
    NotMonotone,
    #[error("input/output error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
