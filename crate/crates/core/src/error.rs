use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid Hecke datum at p = {p}: {reason}")]
    InvalidDatum { p: u64, reason: String },

    #[error("class at p = {p} violates the unitarity symmetry")]
    InvalidClass { p: u64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("outside the domain of evaluation: {0}")]
    Domain(String),

    #[error("pole of order {order}")]
    Pole { order: usize },

    #[error("invalid archimedean parameters: {0}")]
    InvalidParams(String),

    #[error("incomplete data: no datum for prime {prime}")]
    IncompleteData { prime: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: duplicate prime {prime}")]
    Duplicate { line: usize, prime: u64 },

    #[error("line {line}: {message}")]
    Validation { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("exact arithmetic requested but {0}")]
    NotExact(String),
}
