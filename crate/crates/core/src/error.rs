use thiserror::Error;

/// Errors raised by the library.
///
/// Each variant belongs to one of three [`ErrorKind`]s so front ends can map
/// failures onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("mixed radicals: sqrt({0}) and sqrt({1}) cannot be combined")]
    MixedRadicals(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("value must be positive: {0}")]
    NotPositive(String),

    #[error("weights must be strictly positive, got {0:?}")]
    NonPositiveWeight(Vec<u64>),

    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,

    #[error("the unit ideal is not allowed here")]
    UnitIdeal,

    #[error("ideal is not primary to the maximal ideal (no pure power of x{0})")]
    NotPrimary(usize),

    #[error("level {level} is not primary to the maximal ideal")]
    LevelNotPrimary { level: u64 },

    #[error("not a filtration: {0}")]
    NotAFiltration(String),

    #[error("operation requires a discrete valued filtration")]
    NotDiscreteValued,

    #[error("operation not available for table filtrations")]
    TableUnsupported,

    #[error("dimension {0} is not supported by the exact volume path (d <= 3); use the estimate")]
    DimensionUnsupported(usize),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("integer overflow")]
    Overflow,

    #[error("level {requested} exceeds table horizon {horizon}")]
    HorizonExceeded { requested: u64, horizon: u64 },

    #[error("oracle not of min-linear form within bounds: {0}")]
    NotMinLinear(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Coarse classification of [`Error`]s.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed text or JSON input.
    Parse,
    /// A precondition of the requested operation does not hold.
    Precondition,
    /// An internal bound (table horizon, search limit) was reached before an answer.
    Limit,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Parse(_) => ErrorKind::Parse,
            Error::HorizonExceeded { .. } | Error::Overflow => ErrorKind::Limit,
            _ => ErrorKind::Precondition,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
