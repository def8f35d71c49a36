use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the counting engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The predicted amount of work exceeds the configured ceiling.
    #[error("{what}: predicted {predicted} exceeds the configured ceiling of {ceiling}")]
    GuardExceeded {
        what: &'static str,
        predicted: BigUint,
        ceiling: BigUint,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cell value {value} at row {row}, column {col} is outside 1..={n}")]
    CellOutOfRange {
        row: usize,
        col: usize,
        value: u32,
        n: usize,
    },

    #[error("rectangle is not Latin")]
    NotLatin,

    #[error("method `{method}` does not support the {variant} variant")]
    UnsupportedVariant {
        method: &'static str,
        variant: &'static str,
    },

    /// A computed quantity violated a property every correct evaluation has.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("unknown method `{0}`")]
    UnknownMethod(String),

    #[error("unknown format `{0}`")]
    UnknownFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
