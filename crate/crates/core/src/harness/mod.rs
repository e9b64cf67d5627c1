//! Random instance generation, hardness-reduction generators and the
//! repeated-trial experiment runner.

mod experiment;
mod generate;
mod reductions;

pub use experiment::{
    ci95, run_algorithm, run_experiment, splitmix64, trial_seeds, Algorithm, AlgorithmSummary, Estimate,
    ExperimentConfig, ExperimentResult, TrialRecord,
};
pub use generate::{gen_requests, gen_substrate, Range, RequestSpec, RevenueRule, SubstrateSpec, Topology};
pub use reductions::{gen_ddkp_reduction, gen_edp_reduction, EdpReduction};

use crate::cycle::CycleError;
use crate::model::{CommitError, ModelError, StructuralError, Violation};
use crate::path::PathError;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error(transparent)]
    Commit(#[from] CommitError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error("{algorithm} produced an invalid batch: {violations:?}")]
    Invalid { algorithm: String, violations: Vec<Violation> },
}
