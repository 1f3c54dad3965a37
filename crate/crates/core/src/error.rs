use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated the documented precondition of an operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The inputs describe a degenerate case with no well-defined answer.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Numerical integration diverged or produced non-finite values.
    #[error("integration failure at t = {time:e} s: {reason}")]
    Integration { time: f64, reason: String },

    /// A run configuration could not be loaded or validated.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidInput(_) | Error::Json(_) => 2,
            Error::Integration { .. } | Error::Degenerate(_) => 3,
            Error::Io(_) => 1,
        }
    }
}
