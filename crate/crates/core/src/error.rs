use thiserror::Error;

use crate::Elem;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("conjugation of {x} by {g} is undefined")]
    UndefinedConjugation { x: Elem, g: Elem },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// A constructor verified its output and the verification failed.
    #[error("verification failed: {summary}")]
    Verification { summary: String, details: Vec<String> },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
