use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("capacity exceeded: {what} (limit {limit}, got {got})")]
    Capacity {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    /// A backtracking search ran out of its node budget. The caller gets no
    /// answer rather than a possibly wrong one.
    #[error("search budget of {limit} nodes exhausted")]
    Budget { limit: u64 },

    #[error("parse error at byte {pos}: expected {expected}, found {found}")]
    Parse {
        pos: usize,
        expected: String,
        found: String,
    },

    #[error("unknown name `{name}` at byte {pos}")]
    UnknownName { name: String, pos: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
