use thiserror::Error;

/// Syntax error in a group or space expression, with the byte offset where it was detected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(position: usize, message: impl Into<String>) -> Self {
        ParseError { position, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("extended constructor not allowed here: {0}")]
    ExtendedInput(String),
    #[error("operation requires an abelian group, got free product {0}")]
    NotAbelian(String),
    #[error("operation requires a finite group, got {0}")]
    NotFinite(String),
    #[error("group order {order} exceeds the oracle bound {bound}")]
    BoundExceeded { order: u64, bound: u64 },
    #[error("no Moore space M({0},1) exists")]
    NoMooreSpace(String),
    #[error("no two-dimensional recipe known for M({0},1); existence of such a model is an open question")]
    NoRecipe(String),
    #[error("truncation {requested} exceeds the {available} telescope stages of a finite type")]
    TruncationExceeded { requested: usize, available: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}
