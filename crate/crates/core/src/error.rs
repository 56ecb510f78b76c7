use thiserror::Error;

use crate::rect::Rectangle;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cap exceeded: {0}")]
    Cap(String),

    #[error("did not converge: {0}")]
    Convergence(String),

    #[error("amplification gave up after {trials} trials (best mass {best_mass:.6}, minority {best_minority:.6})")]
    TrialsExhausted { trials: usize, best_rect: Option<Rectangle>, best_mass: f64, best_minority: f64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 1,
            Error::Parse { .. } | Error::Json(_) => 2,
            Error::Precondition(_) => 3,
            Error::Cap(_) => 4,
            Error::Convergence(_) | Error::TrialsExhausted { .. } => 5,
            Error::Verification(_) => 6,
            Error::Invariant(_) => 7,
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cap(msg: impl Into<String>) -> Self {
        Error::Cap(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
