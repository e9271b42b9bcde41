//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown party `{0}`")]
    UnknownParty(String),

    #[error("party `{0}` appears more than once")]
    DuplicateParty(String),

    #[error("party index {0} is outside the roster")]
    PartyOutOfRange(usize),

    #[error("rosters differ")]
    RosterMismatch,

    #[error("negative weight `{0}`")]
    NegativeWeight(String),

    #[error("invalid threshold: {0}")]
    InvalidThreshold(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what}: {actual} exceeds the limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("starting outcome is not feasible")]
    InfeasibleStart,

    #[error("augmentation revisited outcome {0}")]
    AugmentCycle(String),

    #[error("outcome is empty")]
    EmptyOutcome,

    #[error("all scores are zero")]
    AllZeroScores,

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// Whether the error comes from a size guard rather than from bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
