use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("{0} is not an element of this group")]
    NotInGroup(String),
    #[error("invalid tableau: {0}")]
    InvalidTableau(String),
    #[error("tableaux of different shapes")]
    ShapeMismatch,
    #[error("element has empty support")]
    EmptySupport,
    #[error("invalid KL cache: {0}")]
    CacheInvalid(String),
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
