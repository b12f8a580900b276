use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set must contain at least one point")]
    EmptyGround,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("point index {index} out of range for ground set of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("operands are defined on different ground sets")]
    GroundMismatch,
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("order must be at least {min}, got {got}")]
    OrderTooSmall { min: u64, got: u64 },
    #[error("point `{0}` does not have exactly one image")]
    NotSingleValued(String),
    #[error("map is not surjective; its pullback is not total")]
    NotSurjective,
    #[error("ground set of size {size} exceeds the configured cap {cap} for this search")]
    GroundTooLarge { size: usize, cap: usize },
    #[error("polynomial degree {0} is below 2")]
    DegreeTooLow(usize),
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("{msg} at line {line}")]
    Parse { line: usize, msg: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
