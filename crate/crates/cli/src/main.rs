use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vne_core::baseline::{generic_batch, GenericEmbedder};
use vne_core::cycle::{build_wdag, greedy_revenue, FeasibleSets};
use vne_core::harness::{
    gen_requests, gen_substrate, run_experiment, Algorithm, ExperimentConfig, Range, RequestSpec, RevenueRule,
    SubstrateSpec, Topology,
};
use vne_core::path::{procedure_pe, PeConfig};
use vne_core::theory::{
    brute_force_path_embed, connected_graphs_up_to_iso, has_spanning_trail, is_supereulerian, sg_to_sset_instance,
    sset_to_sg_instances, UniformInstance,
};
use vne_core::{batch_metrics, Direction, Embedding, EmbeddingBatch, Instance, Shape, SolveMode};

#[derive(Debug, Parser)]
#[command(name = "vne", version, about = "Path and cycle virtual network embedding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a random instance and write it as JSON
    Generate {
        #[command(flatten)]
        substrate: SubstrateArgs,
        #[command(flatten)]
        requests: RequestArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed path requests by path decomposition and knapsack packing
    EmbedPaths {
        instance: PathBuf,
        /// Solver for packing requests onto substrate paths
        #[arg(long, default_value = "greedy")]
        mkp: SolveMode,
        /// Solver for funding packed requests with CPU and bandwidth
        #[arg(long, default_value = "greedy")]
        mdkp: SolveMode,
        /// Write one JSON line per round (path lengths, packed and funded ids)
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed cycle requests on a cycle substrate in revenue-per-resource order
    EmbedCycles {
        instance: PathBuf,
        /// Do not offer requests the cycle embedder rejects to the generic embedder
        #[arg(long)]
        no_fallback: bool,
        /// Write, as JSON lines, the auxiliary DAG of every request for every
        /// feasible start and both directions, on the instance's capacities
        #[arg(long)]
        dump_wdag: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embed requests of any shape with the node-rank baseline
    EmbedGeneric {
        instance: PathBuf,
        /// Rank SNs by raw resources, without neighbour averaging
        #[arg(long)]
        no_smoothing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check the trail, supereulerian and embedding oracles on every
    /// connected graph up to the given size
    VerifyTheory {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..=6))]
        max_nodes: u64,
    },
    /// Run repeated seeded trials and report per-trial and aggregate metrics
    Experiment {
        #[command(flatten)]
        substrate: SubstrateArgs,
        #[command(flatten)]
        requests: RequestArgs,
        /// Comma-separated algorithms: pe, generic, gr, c2ce
        #[arg(long, value_delimiter = ',', default_value = "pe,generic")]
        algorithms: Vec<Algorithm>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall-clock times (output is then no longer reproducible)
        #[arg(long)]
        timing: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TopologyKind {
    Random,
    Complete,
    Cycle,
    Path,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ShapeArg {
    Path,
    Cycle,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct SubstrateArgs {
    #[arg(long, value_enum, default_value_t = TopologyKind::Random)]
    topology: TopologyKind,
    #[arg(long, default_value_t = 30)]
    nodes: usize,
    /// SL count of a random topology
    #[arg(long, default_value_t = 150)]
    edges: usize,
    #[arg(long, default_value_t = 100)]
    cpu_min: u64,
    #[arg(long, default_value_t = 100)]
    cpu_max: u64,
    #[arg(long, default_value_t = 100)]
    bw_min: u64,
    #[arg(long, default_value_t = 100)]
    bw_max: u64,
}

impl SubstrateArgs {
    fn spec(&self) -> SubstrateSpec {
        let nodes = self.nodes;
        let topology = match self.topology {
            TopologyKind::Random => Topology::Random { nodes, edges: self.edges },
            TopologyKind::Complete => Topology::Complete { nodes },
            TopologyKind::Cycle => Topology::Cycle { nodes },
            TopologyKind::Path => Topology::Path { nodes },
        };
        SubstrateSpec { topology, cpu: Range::new(self.cpu_min, self.cpu_max), bw: Range::new(self.bw_min, self.bw_max) }
    }
}

#[derive(Debug, Args)]
struct RequestArgs {
    #[arg(long, value_enum, default_value_t = ShapeArg::Path)]
    shape: ShapeArg,
    /// Number of requests
    #[arg(long, default_value_t = 100)]
    requests: usize,
    #[arg(long, default_value_t = 5)]
    vns_min: u64,
    #[arg(long, default_value_t = 10)]
    vns_max: u64,
    #[arg(long, default_value_t = 1)]
    demand_min: u64,
    #[arg(long, default_value_t = 5)]
    demand_max: u64,
    /// Revenue of a request: unit or vn-count
    #[arg(long, default_value = "unit")]
    revenue: RevenueRule,
}

impl RequestArgs {
    fn spec(&self) -> RequestSpec {
        RequestSpec {
            shape: match self.shape {
                ShapeArg::Path => Shape::Path,
                ShapeArg::Cycle => Shape::Cycle,
            },
            count: self.requests,
            vns: Range::new(self.vns_min, self.vns_max),
            demand: Range::new(self.demand_min, self.demand_max),
            revenue: self.revenue,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    algorithm: &'a str,
    requests: usize,
    accepted: usize,
    acceptance_ratio: f64,
    revenue: u64,
    embeddings: Vec<&'a Embedding>,
}

fn report(algorithm: &str, total: usize, batch: &EmbeddingBatch) -> String {
    let m = batch_metrics(batch, total);
    let r = Report {
        algorithm,
        requests: total,
        accepted: batch.len(),
        acceptance_ratio: m.acceptance_ratio,
        revenue: m.revenue,
        embeddings: batch.accepted().iter().map(|(_, e)| e).collect(),
    };
    serde_json::to_string_pretty(&r).expect("report serialises") + "\n"
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance> {
    Instance::read(path).with_context(|| format!("reading instance {}", path.display()))
}

fn check_batch(inst: &Instance, batch: &EmbeddingBatch) -> Result<()> {
    let violations = batch.validate(&inst.network)?;
    if !violations.is_empty() {
        bail!("embedding batch exceeds capacities: {violations:?}");
    }
    Ok(())
}

fn verify_theory(max_nodes: usize) -> Result<bool> {
    let mut rows: Vec<(String, usize, usize)> = Vec::new();
    for n in 1..=max_nodes {
        let graphs = connected_graphs_up_to_iso(n)?;
        let mut embed_agrees = 0;
        let mut sset = 0;
        let mut sg = 0;
        for g in &graphs {
            let trail = has_spanning_trail(g)?;
            embed_agrees += (brute_force_path_embed(&UniformInstance::spanning(g)?)? == trail) as usize;
            let any = n < 2 || sset_to_sg_instances(g).iter().map(is_supereulerian).collect::<Result<Vec<_>, _>>()?.contains(&true);
            sset += (n < 2 || any == trail) as usize;
            let eul = is_supereulerian(g)?;
            let all = (0..n).map(|v| has_spanning_trail(&sg_to_sset_instance(g, v))).collect::<Result<Vec<_>, _>>()?;
            sg += all.iter().all(|&t| t == eul) as usize;
        }
        rows.push((format!("n={n} path embedding iff spanning trail"), embed_agrees, graphs.len()));
        rows.push((format!("n={n} trail iff some augmented graph supereulerian"), sset, graphs.len()));
        rows.push((format!("n={n} supereulerian iff pendant pair has trail"), sg, graphs.len()));
    }
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    let mut ok = true;
    println!("{:<width$}  {:>9}  result", "check", "agree");
    for (name, good, total) in rows {
        let pass = good == total;
        ok &= pass;
        println!("{name:<width$}  {:>9}  {}", format!("{good}/{total}"), if pass { "PASS" } else { "FAIL" });
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate { substrate, requests, seed, out } => {
            let network = gen_substrate(&substrate.spec(), seed)?;
            let reqs = gen_requests(&requests.spec(), seed.wrapping_add(1))?;
            emit(out.as_deref(), &(Instance::new(network, reqs).to_json() + "\n"))?;
        }
        Command::EmbedPaths { instance, mkp, mdkp, trace, out } => {
            let inst = load(&instance)?;
            let mut net = inst.network.clone();
            let outcome = procedure_pe(&mut net, &inst.requests, PeConfig { mkp, mdkp })?;
            check_batch(&inst, &outcome.batch)?;
            if let Some(path) = trace {
                let mut lines = String::new();
                for it in &outcome.iterations {
                    lines += &serde_json::to_string(it)?;
                    lines.push('\n');
                }
                fs::write(&path, lines).with_context(|| format!("writing {}", path.display()))?;
            }
            emit(out.as_deref(), &report("pe", inst.requests.len(), &outcome.batch))?;
        }
        Command::EmbedCycles { instance, no_fallback, dump_wdag, out } => {
            let inst = load(&instance)?;
            if let Some(path) = dump_wdag {
                let mut lines = String::new();
                for req in &inst.requests {
                    for &start in FeasibleSets::of(&inst.network, req).node_set(0) {
                        for dir in Direction::BOTH {
                            let w = build_wdag(&inst.network, req, start, dir)?;
                            lines += &format!("{{\"request\":{},\"wdag\":{}}}\n", req.id(), serde_json::to_string(&w)?);
                        }
                    }
                }
                fs::write(&path, lines).with_context(|| format!("writing {}", path.display()))?;
            }
            let generic = GenericEmbedder::default();
            let fallback: Option<&dyn vne_core::Embedder> = if no_fallback { None } else { Some(&generic) };
            let mut net = inst.network.clone();
            let outcome = greedy_revenue(&mut net, &inst.requests, fallback)?;
            check_batch(&inst, &outcome.batch)?;
            emit(out.as_deref(), &report("gr", inst.requests.len(), &outcome.batch))?;
        }
        Command::EmbedGeneric { instance, no_smoothing, out } => {
            let inst = load(&instance)?;
            let mut net = inst.network.clone();
            let batch = generic_batch(&mut net, &inst.requests, &GenericEmbedder { smoothing: !no_smoothing })?;
            check_batch(&inst, &batch)?;
            emit(out.as_deref(), &report("generic", inst.requests.len(), &batch))?;
        }
        Command::VerifyTheory { max_nodes } => return verify_theory(max_nodes as usize),
        Command::Experiment { substrate, requests, algorithms, trials, seed, timing, format, out } => {
            let cfg = ExperimentConfig {
                substrate: substrate.spec(),
                requests: requests.spec(),
                algorithms,
                trials,
                seed,
                timing,
            };
            let result = run_experiment(&cfg)?;
            let text = match format {
                Format::Csv => result.to_csv(),
                Format::Json => result.to_json() + "\n",
            };
            emit(out.as_deref(), &text)?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
