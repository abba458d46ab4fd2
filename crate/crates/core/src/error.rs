use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow")]
    Overflow,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty sequence")]
    EmptySequence,

    /// A configurable enumeration or state-space cap was hit.
    #[error("{what}: {needed} exceeds the cap of {cap}")]
    Guard {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("not minimal or bad seed: {0}")]
    NotMinimalOrBadSeed(String),

    /// Raised when a computation contradicts a proved statement. Never expected.
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::Guard { .. })
    }

    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::Consistency(_))
    }

    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
