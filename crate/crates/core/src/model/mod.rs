//! Substrate and request data model, embeddings, and the feasibility check
//! every algorithm's output goes through.
//!
//! Resource amounts are integer units. All capacity comparisons are exact.

mod embedding;
mod network;
mod request;
mod ring;

use thiserror::Error;

pub use embedding::{
    batch_metrics, validate_embedding, BatchMetrics, CommitError, Embedding, EmbeddingBatch,
    StructuralError, Verdict, Violation,
};
pub use network::SubstrateNetwork;
pub use request::{Shape, VirtualRequest};
pub use ring::{Direction, Ring};

/// Index of a substrate node.
pub type NodeId = usize;
/// Index of a substrate link.
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("substrate has no nodes")]
    EmptySubstrate,
    #[error("unknown substrate node {0}")]
    UnknownNode(NodeId),
    #[error("self-loop on substrate node {0}")]
    SelfLoop(NodeId),
    #[error("parallel substrate links between {0} and {1}")]
    ParallelEdge(NodeId, NodeId),
    #[error("substrate is not connected")]
    Disconnected,
    #[error("substrate is not a single cycle")]
    NotACycle,
    #[error("request {id}: {reason}")]
    MalformedRequest { id: usize, reason: String },
    #[error("release of request {0} exceeds capacity; it was not committed")]
    OverRelease(usize),
    #[error(transparent)]
    Structural(#[from] StructuralError),
}

impl ModelError {
    pub(crate) fn malformed(id: usize, reason: String) -> Self {
        ModelError::MalformedRequest { id, reason }
    }
}
