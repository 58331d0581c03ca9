use thiserror::Error;

use crate::combinatorics::GaleRyserViolation;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("coordinate {coord} out of range for length {len}")]
    Coordinate { coord: usize, len: usize },

    #[error("invalid code: {0}")]
    InvalidCode(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("infeasible margins: {0}")]
    Infeasible(GaleRyserViolation),

    #[error("{what} is {actual}, capacity is {limit}")]
    Capacity {
        what: &'static str,
        actual: usize,
        limit: usize,
    },

    #[error("work estimate {needed} exceeds budget {budget}")]
    Budget { needed: u64, budget: u64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
