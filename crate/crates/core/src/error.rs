use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("undeclared symbol `{name}` at line {line}, column {col}")]
    UndeclaredSymbol {
        name: String,
        line: usize,
        col: usize,
    },
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("zero exponent at line {line}, column {col}")]
    ZeroExponent { line: usize, col: usize },
    #[error("commutator of an empty list")]
    EmptyCommutator,
    #[error("no assignment for variable `{0}`")]
    MissingAssignment(String),
    #[error("law `{0}` contains no variable")]
    NoVariable(String),
    #[error("variable `{0}` used in a relator")]
    VariableInRelator(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcError {
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("exponent vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent overflow during collection")]
    Overflow,
    #[error("collection exceeded its step budget")]
    CollectionLimit,
    #[error("empty commutator list")]
    EmptyList,
    #[error("presentation is not weight graded: {0}")]
    Ungraded(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NqError {
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error("resource budget exceeded ({reason}) after completing class {last_class}")]
    Budget { reason: String, last_class: usize },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum DocError {
    #[error("malformed result document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Pc(#[from] PcError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("presentation is not weight graded")]
    Ungraded,
    #[error("weight {k} out of range (class {class})")]
    WeightOutOfRange { k: usize, class: usize },
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Nq(#[from] NqError),
    #[error(transparent)]
    Pc(#[from] PcError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
