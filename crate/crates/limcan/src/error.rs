use thiserror::Error;

/// Every fallible operation in the crate returns this error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-contract input.
    #[error("input error: {0}")]
    Input(String),
    /// A configured size cap was exceeded.
    #[error("cap overflow: {0}")]
    Cap(String),
    /// A precondition of an operation failed; the message carries a witness.
    #[error("guard violated: {0}")]
    Guard(String),
    /// A checked mathematical property failed. Signals a bug or a non-generic random draw.
    #[error("property failure: {0}")]
    Property(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Guard(_) => 2,
            Error::Cap(_) => 3,
            Error::Property(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
