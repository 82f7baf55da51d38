use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    ParseAt { line: usize, msg: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("operation requires a prime field")]
    NotFiniteField,
    #[error("word is not built one letter at a time")]
    NotRestrictedForm,
    #[error("word of length {0} is too short for this normal form")]
    WordTooShort(usize),
    #[error("argument outside the domain: {0}")]
    DomainError(String),
    #[error("algebra is already unital")]
    AlreadyUnital,
    #[error("declared unity fails on basis vector {0}")]
    UnityFails(usize),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
