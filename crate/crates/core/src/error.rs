use thiserror::Error;

/// Errors raised by graph construction, the solvers and the model reductions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain is empty")]
    EmptyDomain,

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("invalid edge {u}-{v}: {reason}")]
    InvalidEdge { u: String, v: String, reason: String },

    #[error("invalid weight for `{0}`: {1}")]
    InvalidWeight(String, String),

    #[error("dimension mismatch: expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid exponent p = {0}")]
    InvalidP(f64),

    #[error("function vanishes identically")]
    ZeroFunction,

    #[error("domain is not connected")]
    DisconnectedDomain,

    #[error("domain is not bipartite")]
    NotBipartite,

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("vertex measure is not the weighted degree: {0}")]
    NotNormalized(String),

    #[error("size {size} exceeds the enumeration cap {cap}")]
    TooLarge { size: usize, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not equitable: {0}")]
    NotEquitable(String),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),

    #[error("index {requested} exceeds the materialized horizon {horizon}")]
    HorizonExceeded { requested: usize, horizon: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
