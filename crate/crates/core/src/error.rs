use thiserror::Error;

/// Errors raised while parsing, loading or checking.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("identifier `{0}` is used both as an agent and as a variable")]
    Namespace(String),
    #[error("malformed model document: {0}")]
    Parse(String),
    #[error("invalid model: {0}")]
    Validation(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown action `{0}`")]
    UnknownAction(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("formula is not a sentence: {0}")]
    NotASentence(String),
    #[error("assignment is not complete")]
    IncompleteAssignment,
    #[error("temporal operator reached with unbound agent `{0}`")]
    FreeUnderTemporal(String),
    #[error("variable `{0}` is not assigned")]
    UnassignedVariable(String),
    #[error("strategy budget of {0} evaluations exhausted")]
    BudgetExceeded(u64),
    #[error("check exceeded its time limit")]
    Timeout,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("formula outside the supported fragment: {0}")]
    UnsupportedFragment(String),
    #[error("both the satisfaction and the violation check succeeded")]
    InconsistentSplit,
    #[error("model too large for this operation: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
