use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(String, String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("vertex map {0:?} is not injective")]
    NotInjective(Vec<usize>),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("flavor violated: {0}")]
    Flavor(String),
    #[error("normalization violated: {0}")]
    Normalization(String),
    #[error("not a form: {0}")]
    NotAForm(String),
    #[error("degree overflow: {0}")]
    DegreeOverflow(String),
    #[error("missing data: {0}")]
    Missing(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
