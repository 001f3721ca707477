use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Bit tuple or structure with the wrong shape.
    #[error("format error: {0}")]
    Format(String),

    /// Text input that could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured size or search budget was exceeded.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// A precondition of the operation does not hold.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Malformed input data (bad vertex, symmetric edge where an orientation is required, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// The relation is not an affine subspace; `witness` lies in its affine hull but not in it.
    #[error("relation is not affine (hull witness {witness:#b})")]
    NotAffine { witness: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
