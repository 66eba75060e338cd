use std::fmt;

use tricorr::Error;

/// How a command failed, and the exit code that goes with it.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or arguments (2).
    Config(String),
    /// Unreadable or malformed input data, or unwritable output (3).
    Input(String),
    /// A check ran and did not pass (4).
    Check(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Input(_) => 3,
            Failure::Check(_) => 4,
        }
    }

    pub fn config(e: Error) -> Self {
        Failure::Config(e.to_string())
    }

    /// Errors raised while reading files count as input errors; anything
    /// else traces back to the arguments.
    pub fn from_data(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::EmptyFile | Error::Io(_) | Error::GridMismatch(_) => {
                Failure::Input(e.to_string())
            }
            other => Failure::Config(other.to_string()),
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Input(m) => write!(f, "input error: {m}"),
            Failure::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}
