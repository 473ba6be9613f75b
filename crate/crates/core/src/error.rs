use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed generator: {0}")]
    MalformedGenerator(String),

    #[error("membership: {0}")]
    Membership(String),

    /// A configurable cap was exceeded; `flag` names the CLI flag that raises it.
    #[error("resource limit exceeded: {what} (limit {limit}, raise with {flag})")]
    Resource {
        what: String,
        limit: u128,
        flag: &'static str,
    },

    #[error("configuration: {0}")]
    Config(String),

    #[error("capability: {0}")]
    Capability(String),

    #[error("construction: {0}")]
    Construction(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("order claim mismatch: file claims {claimed}, generators give {actual}")]
    OrderClaim { claimed: String, actual: String },

    #[error("precondition: {0}")]
    Precondition(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("modular rank disagreement in dimension {dim}: ranks {ranks:?}; rerun with the exact backend")]
    RankDisagreement { dim: usize, ranks: Vec<usize> },

    #[error("internal: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
