use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("level index {index} out of range for a {n_levels}-level grid")]
    LevelIndex { index: usize, n_levels: usize },
    /// An operation was called with inputs violating its contract.
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("codebook has {words} words, need at least 256 to store a byte")]
    CodebookTooSmall { words: usize },
    #[error("invalid configuration: {0}")]
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
