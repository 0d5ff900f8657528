use std::path::PathBuf;

/// Errors produced by the algebra, linear algebra and relation engines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("variable count mismatch: {left} vs {right}")]
    VarCountMismatch { left: usize, right: usize },

    #[error("substitution needs {expected} images, got {got}")]
    ImageCountMismatch { expected: usize, got: usize },

    #[error("generator index must be at least 1 (got k = {0})")]
    ZeroGenerator(u32),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid block tuple {blocks:?}: {reason}")]
    InvalidBlocks { blocks: Vec<u32>, reason: &'static str },

    #[error("the empty word has no zeta index")]
    EmptyWord,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("inhomogeneous combination: {0}")]
    MixedGrading(String),

    #[error("arity mismatch: functional has arity {functional}, polynomial has {poly} variables")]
    ArityMismatch { functional: usize, poly: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("bracket formulas disagree: {0}")]
    BracketMismatch(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("cache entry {path} is corrupt: {reason}")]
    CorruptCache { path: PathBuf, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
