use crate::graph::NodeId;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {nodes} nodes")]
    NodeOutOfRange { node: NodeId, nodes: usize },

    #[error("edge ({u}, {v}) has an endpoint out of range for a graph with {nodes} nodes")]
    EdgeOutOfRange { u: NodeId, v: NodeId, nodes: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("iteration did not converge within {max_iter} steps (residual {residual:.3e})")]
    NoConvergence { max_iter: usize, residual: f64 },

    #[error("k = {k} exceeds the {available} available candidate sources")]
    TooFewCandidates { k: usize, available: usize },

    #[error("{subsets} candidate subsets exceed the enumeration cap of {cap}")]
    EnumerationCap { subsets: u128, cap: u128 },

    #[error("family construction failed: {0}")]
    Construction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
