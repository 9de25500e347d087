use thiserror::Error;

/// Errors shared by every module of the workbench.
///
/// The variants map onto the CLI exit codes: usage and parse problems are
/// caller mistakes, resource errors are guard violations, and search
/// exhaustion means a bounded search ran out of candidates.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("bounded search exhausted at step {step}: no vertex below {bound} adjacent to {constraints:?} outside {excluded} excluded vertices")]
    SearchExhausted {
        step: usize,
        bound: u64,
        constraints: Vec<u64>,
        excluded: usize,
    },
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub(crate) fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
