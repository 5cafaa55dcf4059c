use thiserror::Error;

/// Errors produced by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("line {line}: duplicate month {year}-{month:02}")]
    DuplicateMonth { line: u64, year: i32, month: u8 },

    #[error("line {line}: rainfall value {value:?} is not a number")]
    NonNumericValue { line: u64, value: String },

    #[error("line {line}: rainfall must be finite and non-negative, got {value}")]
    InvalidValue { line: u64, value: f64 },

    #[error("month {0} is outside 1..=12")]
    InvalidMonth(u8),

    #[error("missing value at month index {index} (policy: {policy})")]
    MissingValue { index: usize, policy: &'static str },

    #[error("calendar month {0} has no present values to average")]
    EmptyCalendarMonth(u8),

    #[error("{what} {value} out of range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("unknown wavelet {0:?} (expected haar, db2, db3 or db4)")]
    UnknownWavelet(String),

    #[error("wavelet filter {name} violates invariant: {reason}")]
    FilterInvariant { name: &'static str, reason: String },

    #[error("signal of length {len} is shorter than the {filter_len}-tap filter")]
    SignalTooShort { len: usize, filter_len: usize },

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("corrupted decomposition: {0}")]
    CorruptDecomposition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite value at {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Coarse category used by the command line to pick an exit code.
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::EmptyInput
            | Error::MalformedRow { .. }
            | Error::DuplicateMonth { .. }
            | Error::NonNumericValue { .. }
            | Error::InvalidValue { .. }
            | Error::InvalidMonth(_) => ErrorCategory::Parse,
            Error::OutOfRange { .. } | Error::SignalTooShort { .. } => ErrorCategory::Range,
            _ => ErrorCategory::Invalid,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Range,
    Invalid,
}
