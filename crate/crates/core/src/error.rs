use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field size {q} exceeds the configured bound {bound}")]
    FieldTooLarge { q: u64, bound: u64 },

    #[error("elements belong to different fields")]
    MixedFields,

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not invertible")]
    NotInvertible,

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("invalid coefficient field: {0}")]
    InvalidCoeffField(String),

    #[error("budget exceeded: {what} needs {required}, limit is {limit}")]
    BudgetExceeded {
        what: String,
        required: u128,
        limit: u128,
    },

    #[error("element is not in {0}")]
    NotInSubgroup(String),

    #[error("vector left the span of the module basis")]
    LeftSpan,

    #[error("coefficient growth exceeded {bits} bits during elimination")]
    CoefficientBlowup { bits: u64 },

    #[error("expected a non-negative integer, got {0}")]
    NotAnInteger(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
