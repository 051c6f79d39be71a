use thiserror::Error;

/// Errors raised by the evaluators and the CLI front-end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("index {index} out of range (available: {available})")]
    OutOfRange { index: usize, available: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("pole at s = {0}")]
    Pole(String),

    #[error("branch guard: {0}")]
    BranchGuard(String),

    #[error("singular factor at term {index}")]
    SingularFactor { index: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("integer overflow: {0}")]
    Overflow(String),

    #[error("grid resolution: {0}")]
    GridResolution(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
