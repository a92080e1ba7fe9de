use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An index, level or degree outside its admissible range.
    #[error("range error: {0}")]
    Range(String),

    /// Operands whose shapes or lengths do not agree.
    #[error("shape error: {0}")]
    Shape(String),

    /// An argument that violates an operation's precondition.
    #[error("argument error: {0}")]
    Argument(String),

    /// A family parameter that falls in the family's excluded set.
    #[error("excluded parameter: {0}")]
    Excluded(String),

    /// A generated object failed a check it must pass by construction.
    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    /// A space or parameter string that does not follow the grammar.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
