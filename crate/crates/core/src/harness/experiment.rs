use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::baseline::{generic_batch, GenericEmbedder};
use crate::cycle::{c2ce_in_order, greedy_revenue};
use crate::model::{batch_metrics, EmbeddingBatch, Shape, SubstrateNetwork, VirtualRequest};
use crate::path::{procedure_pe, PeConfig};

use super::generate::{gen_requests, gen_substrate, RequestSpec, SubstrateSpec, Topology};
use super::HarnessError;

/// Embedding algorithm run by an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Path decomposition with MKP packing and MDKP funding (path requests).
    Pe,
    /// The generic node-rank and shortest-path embedder (any shape).
    Generic,
    /// Revenue-ordered cycle embedding with the generic fallback.
    Gr,
    /// Cycle embedding in input order without fallback.
    C2ce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Pe => "pe",
            Algorithm::Generic => "generic",
            Algorithm::Gr => "gr",
            Algorithm::C2ce => "c2ce",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pe" => Ok(Algorithm::Pe),
            "generic" => Ok(Algorithm::Generic),
            "gr" => Ok(Algorithm::Gr),
            "c2ce" => Ok(Algorithm::C2ce),
            other => Err(format!("unknown algorithm `{other}` (pe|generic|gr|c2ce)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub substrate: SubstrateSpec,
    pub requests: RequestSpec,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub seed: u64,
    /// Record wall-clock times. Off by default so that output files depend
    /// only on the configuration.
    #[serde(default)]
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Config("at least one trial is needed".into()));
        }
        if self.algorithms.is_empty() {
            return Err(HarnessError::Config("no algorithm selected".into()));
        }
        self.requests.check()?;
        let ring = matches!(self.substrate.topology, Topology::Cycle { .. });
        for &a in &self.algorithms {
            match a {
                Algorithm::Pe if self.requests.shape != Shape::Path => {
                    return Err(HarnessError::Config("pe embeds path requests only".into()));
                }
                Algorithm::Gr | Algorithm::C2ce if self.requests.shape != Shape::Cycle || !ring => {
                    return Err(HarnessError::Config(format!(
                        "{a} embeds cycle requests on a cycle substrate only"
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Metrics of one algorithm on one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub algorithm: Algorithm,
    pub acceptance_ratio: f64,
    pub revenue: u64,
    pub wall_ms: f64,
}

/// Mean and 95% confidence half-width over trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    pub ci95: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgorithmSummary {
    pub algorithm: Algorithm,
    pub samples: usize,
    pub acceptance_ratio: Estimate,
    pub revenue: Estimate,
    pub wall_ms: Estimate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    /// Sorted by trial, then by the configured algorithm order.
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<AlgorithmSummary>,
}

/// SplitMix64 finaliser; decorrelates sub-seeds derived from one master.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seeds of the substrate and of the request list of trial `t`.
pub fn trial_seeds(master: u64, t: usize) -> (u64, u64) {
    let base = splitmix64(master ^ splitmix64(t as u64));
    (splitmix64(base ^ 1), splitmix64(base ^ 2))
}

/// Two-sided 95% half-width of the mean: Student-t below 30 samples,
/// normal from 30 on, 0 for a single sample.
pub fn ci95(samples: &[f64]) -> Estimate {
    let n = samples.len();
    if n == 0 {
        return Estimate { mean: 0.0, ci95: 0.0 };
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return Estimate { mean, ci95: 0.0 };
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let q = if n < 30 {
        StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive dof").inverse_cdf(0.975)
    } else {
        1.959_964
    };
    Estimate { mean, ci95: q * (var / n as f64).sqrt() }
}

/// Runs `alg` on a private copy of `net`, then checks the batch against
/// capacities and residual bookkeeping.
pub fn run_algorithm(
    alg: Algorithm,
    net: &SubstrateNetwork,
    requests: &[VirtualRequest],
) -> Result<EmbeddingBatch, HarnessError> {
    let mut work = net.clone();
    let generic = GenericEmbedder::default();
    let batch = match alg {
        Algorithm::Pe => procedure_pe(&mut work, requests, PeConfig::default())?.batch,
        Algorithm::Generic => generic_batch(&mut work, requests, &generic)?,
        Algorithm::Gr => greedy_revenue(&mut work, requests, Some(&generic))?.batch,
        Algorithm::C2ce => c2ce_in_order(&mut work, requests)?,
    };
    let violations = batch.validate(net)?;
    if !violations.is_empty() || !batch.residuals_conserved(&work) {
        return Err(HarnessError::Invalid { algorithm: alg.name().to_string(), violations });
    }
    Ok(batch)
}

fn run_trial(cfg: &ExperimentConfig, t: usize) -> Result<Vec<TrialRecord>, HarnessError> {
    let (s_seed, r_seed) = trial_seeds(cfg.seed, t);
    let net = gen_substrate(&cfg.substrate, s_seed)?;
    let requests = gen_requests(&cfg.requests, r_seed)?;
    cfg.algorithms
        .iter()
        .map(|&alg| {
            let began = Instant::now();
            let batch = run_algorithm(alg, &net, &requests)?;
            let elapsed = began.elapsed().as_secs_f64() * 1e3;
            let m = batch_metrics(&batch, requests.len());
            Ok(TrialRecord {
                trial: t,
                algorithm: alg,
                acceptance_ratio: m.acceptance_ratio,
                revenue: m.revenue,
                wall_ms: if cfg.timing { elapsed } else { 0.0 },
            })
        })
        .collect()
}

/// Runs every trial (in parallel, each on its own instance) and aggregates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult, HarnessError> {
    cfg.validate()?;
    let per_trial: Vec<Vec<TrialRecord>> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<_, _>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();
    let summaries = cfg
        .algorithms
        .iter()
        .map(|&alg| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.algorithm == alg).collect();
            let col = |f: fn(&TrialRecord) -> f64| ci95(&rows.iter().map(|r| f(r)).collect::<Vec<_>>());
            AlgorithmSummary {
                algorithm: alg,
                samples: rows.len(),
                acceptance_ratio: col(|r| r.acceptance_ratio),
                revenue: col(|r| r.revenue as f64),
                wall_ms: col(|r| r.wall_ms),
            }
        })
        .collect();
    Ok(ExperimentResult { config: cfg.clone(), records, summaries })
}

impl ExperimentResult {
    pub fn summary(&self, alg: Algorithm) -> Option<&AlgorithmSummary> {
        self.summaries.iter().find(|s| s.algorithm == alg)
    }

    /// Columns `trial, algorithm, acceptance_ratio, revenue, wall_ms`; one
    /// row per trial and algorithm, then a `mean` and a `ci95` row per
    /// algorithm.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["trial", "algorithm", "acceptance_ratio", "revenue", "wall_ms"]).expect("in-memory write");
        for r in &self.records {
            w.write_record([
                r.trial.to_string(),
                r.algorithm.to_string(),
                format!("{:.6}", r.acceptance_ratio),
                r.revenue.to_string(),
                format!("{:.3}", r.wall_ms),
            ])
            .expect("in-memory write");
        }
        for s in &self.summaries {
            let rows = [
                ("mean", s.acceptance_ratio.mean, s.revenue.mean, s.wall_ms.mean),
                ("ci95", s.acceptance_ratio.ci95, s.revenue.ci95, s.wall_ms.ci95),
            ];
            for (label, acr, rev, ms) in rows {
                w.write_record([
                    label.to_string(),
                    s.algorithm.to_string(),
                    format!("{acr:.6}"),
                    format!("{rev:.6}"),
                    format!("{ms:.3}"),
                ])
                .expect("in-memory write");
            }
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("CSV is UTF-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serialises")
    }
}
