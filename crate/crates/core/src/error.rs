use thiserror::Error;

use crate::semiring::SemiringId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("semiring mismatch: {left} vs {right}")]
    SemiringMismatch { left: SemiringId, right: SemiringId },

    #[error("semiring {0} has no order")]
    Unordered(SemiringId),

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("invalid literal `{text}`: {reason}")]
    InvalidLiteral { text: String, reason: String },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("assignment has no value for literal `{0}`")]
    MissingLiteral(String),

    #[error("variable `{0}` is unassigned")]
    UnassignedVariable(String),

    #[error("interpretation has no value for `{0}`")]
    MissingFact(String),

    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("malformed machine: {0}")]
    Machine(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("decode error at offset {offset}: {msg}")]
    Decode { offset: usize, msg: String },

    #[error("unsupported nesting: {0}")]
    UnsupportedNesting(String),

    #[error("compile error: {0}")]
    Compile(String),

    #[error("search bound exceeded: {needed} candidates > cap {cap}")]
    BoundExceeded { needed: u128, cap: u128 },
}
