use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{EdgeId, ModelError, NodeId, SubstrateNetwork, VirtualRequest};

/// Node map plus link map of one request.
///
/// `link_map[k]` lists the SLs of VL `k` in order, walking from the host of
/// the link's first VN to the host of its second VN.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub request: usize,
    pub node_map: Vec<NodeId>,
    pub link_map: Vec<Vec<EdgeId>>,
}

/// The embedding does not describe anything checkable against the request.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("embedding targets request {found}, expected {expected}")]
    RequestMismatch { expected: usize, found: usize },
    #[error("node map has {found} entries for {expected} VNs")]
    NodeMapLength { expected: usize, found: usize },
    #[error("link map has {found} entries for {expected} VLs")]
    LinkMapLength { expected: usize, found: usize },
    #[error("VN {vn} mapped to unknown SN {sn}")]
    UnknownNode { vn: usize, sn: NodeId },
    #[error("VL {vl} routed over unknown SL {sl}")]
    UnknownEdge { vl: usize, sl: EdgeId },
    #[error("VL {vl}: SL at position {position} does not continue the path")]
    BrokenPath { vl: usize, position: usize },
}

/// A single broken mapping constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// Two VNs of the same request share an SN.
    NotInjective { sn: NodeId, first: usize, second: usize },
    Cpu { sn: NodeId, demand: u64, available: u64 },
    Bandwidth { sl: EdgeId, demand: u64, available: u64 },
    /// The routed path of a VL does not end on the host of its second VN.
    Endpoint { vl: usize },
    /// The routed path of a VL visits an SN twice.
    RepeatedNode { vl: usize, sn: NodeId },
}

/// Outcome of a structurally sound validation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CommitError {
    #[error(transparent)]
    Structural(#[from] StructuralError),
    #[error("embedding of request {request} exceeds residual capacity: {violations:?}")]
    Infeasible { request: usize, violations: Vec<Violation> },
}

/// Per-SN CPU and per-SL bandwidth consumed by one embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Usage {
    pub cpu: Vec<(NodeId, u64)>,
    pub bw: Vec<(EdgeId, u64)>,
}

/// Checks `emb` against the *capacities* of `net`.
///
/// Pass [`SubstrateNetwork::residual_snapshot`] to check against residuals.
pub fn validate_embedding(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    emb: &Embedding,
) -> Result<Verdict, StructuralError> {
    check(net, net.cpu_capacities(), net.bw_capacities(), req, emb).map(|(v, _)| v)
}

fn check(
    net: &SubstrateNetwork,
    cpu_avail: &[u64],
    bw_avail: &[u64],
    req: &VirtualRequest,
    emb: &Embedding,
) -> Result<(Verdict, Usage), StructuralError> {
    if emb.request != req.id() {
        return Err(StructuralError::RequestMismatch { expected: req.id(), found: emb.request });
    }
    if emb.node_map.len() != req.vn_count() {
        return Err(StructuralError::NodeMapLength {
            expected: req.vn_count(),
            found: emb.node_map.len(),
        });
    }
    if emb.link_map.len() != req.vl_count() {
        return Err(StructuralError::LinkMapLength {
            expected: req.vl_count(),
            found: emb.link_map.len(),
        });
    }
    for (vn, &sn) in emb.node_map.iter().enumerate() {
        if sn >= net.node_count() {
            return Err(StructuralError::UnknownNode { vn, sn });
        }
    }

    let mut violations = Vec::new();
    let mut host_of: Vec<Option<usize>> = vec![None; net.node_count()];
    let mut cpu_used = vec![0u64; net.node_count()];
    for (vn, &sn) in emb.node_map.iter().enumerate() {
        match host_of[sn] {
            Some(first) => violations.push(Violation::NotInjective { sn, first, second: vn }),
            None => host_of[sn] = Some(vn),
        }
        cpu_used[sn] += req.cpu(vn);
    }

    let mut bw_used = vec![0u64; net.edge_count()];
    let mut on_path = vec![false; net.node_count()];
    for (vl, path) in emb.link_map.iter().enumerate() {
        let (a, b) = req.link(vl);
        let start = emb.node_map[a];
        let mut cur = start;
        let mut visited = vec![start];
        on_path[start] = true;
        let mut repeated = None;
        for (position, &sl) in path.iter().enumerate() {
            if sl >= net.edge_count() {
                for &v in &visited {
                    on_path[v] = false;
                }
                return Err(StructuralError::UnknownEdge { vl, sl });
            }
            let Some(next) = net.opposite(sl, cur) else {
                for &v in &visited {
                    on_path[v] = false;
                }
                return Err(StructuralError::BrokenPath { vl, position });
            };
            if on_path[next] && repeated.is_none() {
                repeated = Some(next);
            }
            on_path[next] = true;
            visited.push(next);
            bw_used[sl] += req.bw(vl);
            cur = next;
        }
        for &v in &visited {
            on_path[v] = false;
        }
        if let Some(sn) = repeated {
            violations.push(Violation::RepeatedNode { vl, sn });
        }
        if cur != emb.node_map[b] {
            violations.push(Violation::Endpoint { vl });
        }
    }

    let mut usage = Usage { cpu: Vec::new(), bw: Vec::new() };
    for (sn, &demand) in cpu_used.iter().enumerate() {
        if demand == 0 {
            continue;
        }
        if demand > cpu_avail[sn] {
            violations.push(Violation::Cpu { sn, demand, available: cpu_avail[sn] });
        }
        usage.cpu.push((sn, demand));
    }
    for (sl, &demand) in bw_used.iter().enumerate() {
        if demand == 0 {
            continue;
        }
        if demand > bw_avail[sl] {
            violations.push(Violation::Bandwidth { sl, demand, available: bw_avail[sl] });
        }
        usage.bw.push((sl, demand));
    }
    Ok((Verdict { violations }, usage))
}

pub(crate) fn usage_of(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    emb: &Embedding,
) -> Result<Usage, StructuralError> {
    check(net, net.cpu_capacities(), net.bw_capacities(), req, emb).map(|(_, u)| u)
}

impl SubstrateNetwork {
    /// Validates `emb` against the current residuals and, if feasible,
    /// subtracts its demands. Nothing changes on error.
    pub fn commit(&mut self, req: &VirtualRequest, emb: &Embedding) -> Result<(), CommitError> {
        let (verdict, usage) = check(self, &self.residual_cpu, &self.residual_bw, req, emb)?;
        if !verdict.is_feasible() {
            return Err(CommitError::Infeasible { request: req.id(), violations: verdict.violations });
        }
        for (sn, d) in usage.cpu {
            self.residual_cpu[sn] -= d;
        }
        for (sl, d) in usage.bw {
            self.residual_bw[sl] -= d;
        }
        Ok(())
    }

    /// Returns the demands of a previously committed `emb`.
    pub fn release(&mut self, req: &VirtualRequest, emb: &Embedding) -> Result<(), ModelError> {
        let usage = usage_of(self, req, emb)?;
        let over_cpu = usage.cpu.iter().any(|&(sn, d)| self.residual_cpu[sn] + d > self.cpu(sn));
        let over_bw = usage.bw.iter().any(|&(sl, d)| self.residual_bw[sl] + d > self.bw(sl));
        if over_cpu || over_bw {
            return Err(ModelError::OverRelease(req.id()));
        }
        for (sn, d) in usage.cpu {
            self.residual_cpu[sn] += d;
        }
        for (sl, d) in usage.bw {
            self.residual_bw[sl] += d;
        }
        Ok(())
    }
}

/// Requests accepted onto one substrate, with aggregate resource usage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingBatch {
    accepted: Vec<(VirtualRequest, Embedding)>,
    cpu_usage: Vec<u64>,
    bw_usage: Vec<u64>,
}

impl EmbeddingBatch {
    pub fn new(net: &SubstrateNetwork) -> Self {
        Self {
            accepted: Vec::new(),
            cpu_usage: vec![0; net.node_count()],
            bw_usage: vec![0; net.edge_count()],
        }
    }

    /// Commits `emb` on `net` and records it.
    pub fn commit(
        &mut self,
        net: &mut SubstrateNetwork,
        req: &VirtualRequest,
        emb: Embedding,
    ) -> Result<(), CommitError> {
        net.commit(req, &emb)?;
        let usage = usage_of(net, req, &emb)?;
        self.cpu_usage.resize(net.node_count(), 0);
        self.bw_usage.resize(net.edge_count(), 0);
        for (sn, d) in usage.cpu {
            self.cpu_usage[sn] += d;
        }
        for (sl, d) in usage.bw {
            self.bw_usage[sl] += d;
        }
        self.accepted.push((req.clone(), emb));
        Ok(())
    }

    pub fn accepted(&self) -> &[(VirtualRequest, Embedding)] {
        &self.accepted
    }

    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    pub fn contains(&self, request: usize) -> bool {
        self.accepted.iter().any(|(r, _)| r.id() == request)
    }

    pub fn revenue(&self) -> u64 {
        self.accepted.iter().map(|(r, _)| r.revenue()).sum()
    }

    pub fn cpu_usage(&self) -> &[u64] {
        &self.cpu_usage
    }

    pub fn bw_usage(&self) -> &[u64] {
        &self.bw_usage
    }

    /// Re-checks every member embedding and the aggregate usage against the
    /// capacities of `net`. Returns all violations found.
    pub fn validate(&self, net: &SubstrateNetwork) -> Result<Vec<Violation>, StructuralError> {
        let mut violations = Vec::new();
        let mut cpu = vec![0u64; net.node_count()];
        let mut bw = vec![0u64; net.edge_count()];
        for (req, emb) in &self.accepted {
            violations.extend(validate_embedding(net, req, emb)?.violations);
            let usage = usage_of(net, req, emb)?;
            for (sn, d) in usage.cpu {
                cpu[sn] += d;
            }
            for (sl, d) in usage.bw {
                bw[sl] += d;
            }
        }
        for (sn, &d) in cpu.iter().enumerate() {
            if d > net.cpu(sn) {
                violations.push(Violation::Cpu { sn, demand: d, available: net.cpu(sn) });
            }
        }
        for (sl, &d) in bw.iter().enumerate() {
            if d > net.bw(sl) {
                violations.push(Violation::Bandwidth { sl, demand: d, available: net.bw(sl) });
            }
        }
        Ok(violations)
    }

    /// True iff `residual = capacity - usage` on every SN and SL of `net`.
    pub fn residuals_conserved(&self, net: &SubstrateNetwork) -> bool {
        (0..net.node_count()).all(|v| net.residual_cpu(v) + self.cpu_usage.get(v).copied().unwrap_or(0) == net.cpu(v))
            && (0..net.edge_count())
                .all(|e| net.residual_bw(e) + self.bw_usage.get(e).copied().unwrap_or(0) == net.bw(e))
    }
}

/// Acceptance ratio and revenue of a batch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatchMetrics {
    pub acceptance_ratio: f64,
    pub revenue: u64,
}

/// `|S| / n` and the summed revenue of `S`; a ratio of 0 when `n` is 0.
pub fn batch_metrics(batch: &EmbeddingBatch, total_requests: usize) -> BatchMetrics {
    let acceptance_ratio = if total_requests == 0 {
        0.0
    } else {
        batch.len() as f64 / total_requests as f64
    };
    BatchMetrics { acceptance_ratio, revenue: batch.revenue() }
}
