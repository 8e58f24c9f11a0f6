use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("not a complex: {0}")]
    NotAComplex(String),
    #[error("truncation: {0}")]
    Truncation(String),
    #[error("invalid diagram: {0}")]
    DiagramInvalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::Json(_) => 1,
            Error::Budget(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
