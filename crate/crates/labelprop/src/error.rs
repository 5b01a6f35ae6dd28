use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    #[error("isolated node {0} in constructed graph")]
    IsolatedNode(usize),

    #[error("graph not connected")]
    NotConnected,

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("all {0} trials diverged")]
    AllTrialsDiverged(usize),

    #[error("sweep grid has {points} points, exceeding the cap of {cap}")]
    GridTooLarge { points: usize, cap: usize },

    #[error("metrics error: {0}")]
    Metrics(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
