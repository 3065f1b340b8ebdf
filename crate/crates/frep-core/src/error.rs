use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("evaluation needs a {dim}-dimensional coordinate space, above the cap of {cap} (set FREP_ROW_CAP to raise it)")]
    Cap { dim: usize, cap: usize },

    #[error("span(W) is not contained in span(U)")]
    NotSubspace,

    #[error("subspace is not invariant under the operator")]
    NotInvariant,

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, col, msg: msg.into() }
    }
}
