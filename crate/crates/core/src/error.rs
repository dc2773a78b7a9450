use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid root: {0}")]
    InvalidRoot(String),
    #[error("weight is not dominant: {0}")]
    NonDominant(String),
    #[error("weight is not integral: {0}")]
    NonIntegral(String),
    #[error("basis mismatch: expected {expected}, got {got}")]
    BasisMismatch { expected: &'static str, got: &'static str },
    #[error("zero vector")]
    ZeroVector,
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
