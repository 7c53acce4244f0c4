use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An index, list or marriage does not fit the market it is used with.
    #[error("domain: {0}")]
    Domain(String),

    /// Brute-force enumeration was requested past the configured bound.
    #[error("capacity: n={n} exceeds oracle bound {bound}")]
    Capacity { n: usize, bound: usize },

    #[error("parameter: {0}")]
    Parameter(String),

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("query: {0}")]
    Query(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A party tried to look at the profile held by the other party.
    #[error("isolation fault: {0}")]
    Isolation(String),

    /// A query strategy issued a query that no single party can answer.
    #[error("model violation: {0}")]
    ModelViolation(String),

    #[error("protocol: {0}")]
    Protocol(String),

    #[error("format: {0}")]
    Format(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
