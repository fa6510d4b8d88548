use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("lattice side must be at least 3, got {0}")]
    SideTooSmall(usize),

    #[error("agent index {index} out of range for {n} agents")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("agents {x} and {y} are not Moore-adjacent")]
    NotAdjacent { x: usize, y: usize },

    #[error("keep_count {keep} exceeds the {available} agents of the source strategy")]
    KeepCount { keep: usize, available: usize },

    #[error("survivor at index {0} does not hold the source strategy")]
    BadSurvivor(usize),

    #[error("snapshot parse error at line {line}: {msg}")]
    SnapshotParse { line: usize, msg: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
