use thiserror::Error;

/// Errors raised by validation and by operations with documented preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("asymmetric values: {0}")]
    AsymmetricValues(String),
    #[error("value out of range: {0}")]
    OutOfRangeValue(String),
    #[error("bad breakpoints: {0}")]
    BadBreakpoints(String),
    #[error("pattern too large: k={k} exceeds cap {cap}")]
    PatternTooLarge { k: usize, cap: usize },
    #[error("too many cells for exact search: {cells} > {cap}")]
    TooManyCells { cells: usize, cap: usize },
    #[error("depth too large: {0}")]
    DepthTooLarge(String),
    #[error("incompatible resolution: {0}")]
    IncompatibleResolution(String),
    #[error("empty block: {0}")]
    EmptyBlock(String),
    #[error("graph too large: {0}")]
    GraphTooLarge(String),
    #[error("bad spec: {0}")]
    BadSpec(String),
    #[error("bad graph: {0}")]
    BadGraph(String),
    #[error("bad shift map: {0}")]
    BadShiftMap(String),
    #[error("bad partition: {0}")]
    BadPartition(String),
    #[error("bad config: {0}")]
    BadConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
