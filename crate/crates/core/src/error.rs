use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("node id {node} out of range for {n} nodes")]
    Index { node: usize, n: usize },

    #[error("community {community} is empty")]
    EmptyCommunity { community: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("node {node} has no community label")]
    IncompleteLabeling { node: usize },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("node {node} is isolated (degree 0)")]
    IsolatedNode { node: usize },

    #[error("sigma {sigma} is below the maximum degree {max_degree}")]
    SigmaTooSmall { sigma: f64, max_degree: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("membership matrix must be a binary indicator")]
    NotBinary,

    #[error("invalid null model value {0}; a positive constant is required")]
    InvalidNull(f64),

    #[error("negative entry {value} at ({row}, {col})")]
    NegativeInput { row: usize, col: usize, value: f64 },

    #[error("row {node} of the membership matrix is all zero")]
    AmbiguousRow { node: usize },

    #[error("series has zero variance")]
    DegenerateSeries,

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("generation failed: {0}")]
    Generation(String),

    #[error("config {line}: {message}")]
    Config { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
