use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: String, right: String },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("system has no nontrivial solution (rank {rank} = {unknowns} unknowns)")]
    NoNontrivialSolution { rank: usize, unknowns: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("validation error at line {line}: {message}")]
    Validation { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("formal degree {degree} exceeds limit {limit}")]
    DegreeOverflow { degree: u64, limit: u64 },
    #[error("term count exceeded limit {limit}")]
    TermLimitExceeded { limit: usize },
    #[error("weight {value} at {position} outside [1, {max}]")]
    WeightOutOfRange {
        position: String,
        value: u64,
        max: u64,
    },
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("enumeration over 2^{n} sets exceeds the guard 2^{limit}")]
    EnumerationTooLarge { n: usize, limit: usize },
    #[error("empty family")]
    EmptyFamily,
    #[error("empty set")]
    EmptySet,
    #[error("budget exhausted; uncovered families: {uncovered:?}")]
    BudgetExhausted { uncovered: Vec<usize> },
    #[error("self-check failed: {0}")]
    SelfCheck(String),
}

impl Error {
    pub(crate) fn validation(line: usize, message: impl Into<String>) -> Self {
        Error::Validation {
            line,
            message: message.into(),
        }
    }

    /// True for errors produced by the resource guards (term caps, degree caps,
    /// matrix-size limits, enumeration guards).
    pub fn is_resource_guard(&self) -> bool {
        matches!(
            self,
            Error::DegreeOverflow { .. }
                | Error::TermLimitExceeded { .. }
                | Error::ResourceLimit(_)
                | Error::EnumerationTooLarge { .. }
                | Error::BudgetExhausted { .. }
        )
    }
}
