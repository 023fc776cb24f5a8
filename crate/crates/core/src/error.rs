use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCount { left: usize, right: usize },

    #[error("matrix must be {expected}x{expected}")]
    MatrixShape { expected: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid bundle descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("basis size {size} exceeds limit {limit}")]
    BasisLimit { size: u128, limit: u128 },

    #[error("inconsistent dimensions: {0}")]
    Dimension(String),

    #[error("outside supported regime: {0}")]
    Regime(String),

    #[error("duplicate factor after normalization: {0}")]
    DuplicateFactor(String),

    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
}
