use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("{what} contains a non-finite value at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("{what} must not be empty")]
    Empty { what: &'static str },
    #[error("kernel length {s} exceeds signal length {n}")]
    KernelTooLong { s: usize, n: usize },
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParam { name: &'static str, reason: String },
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse failure at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}
