//! Exhaustive, size-capped deciders and enumerators used to check the
//! heuristics and the structural results they rest on.
//!
//! Everything here is exponential. Each entry point refuses inputs above
//! its documented cap instead of truncating the search.

mod euler;
mod graph;
mod oracle;
mod trail;

use thiserror::Error;

pub use euler::{is_supereulerian, sg_to_sset_instance, sset_to_sg_instances};
pub use graph::{connected_graphs_up_to_iso, SimpleGraph};
pub use oracle::{
    brute_force_simplex_cycle, enumerate_embeddings, max_acceptance, simplex_tableaus, SimplexTableau,
};
pub use trail::{brute_force_path_embed, has_spanning_trail, UniformInstance};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("{what}: size {size} exceeds the exhaustive-search cap of {limit}")]
    TooLarge { what: &'static str, size: usize, limit: usize },
    #[error("{0}")]
    Shape(String),
}

pub(crate) fn cap(what: &'static str, size: usize, limit: usize) -> Result<(), TheoryError> {
    if size > limit {
        Err(TheoryError::TooLarge { what, size, limit })
    } else {
        Ok(())
    }
}
