//! Virtual network embedding for path and cycle requests.
//!
//! Path requests are packed onto path decompositions of the substrate with
//! knapsack solvers ([`path`]); cycle requests are routed around ring
//! substrates through layered weighted DAGs ([`cycle`]). A node-rank
//! baseline ([`baseline`]), exhaustive oracles for small cases ([`theory`])
//! and an experiment harness ([`harness`]) complete the crate.

pub mod baseline;
pub mod cycle;
pub mod harness;
pub mod instance;
pub mod knapsack;
pub mod model;
pub mod path;
pub mod theory;

pub use baseline::{Embedder, GenericEmbedder};
pub use instance::Instance;
pub use knapsack::SolveMode;
pub use model::{
    batch_metrics, validate_embedding, BatchMetrics, CommitError, Direction, EdgeId, Embedding, EmbeddingBatch,
    ModelError, NodeId, Ring, Shape, StructuralError, SubstrateNetwork, Verdict, VirtualRequest, Violation,
};
