//! Instance generators that encode edge-disjoint paths and cardinality
//! multi-dimensional knapsack as embedding problems.

use crate::knapsack::MdkpInstance;
use crate::model::{NodeId, SubstrateNetwork, VirtualRequest};
use crate::theory::SimpleGraph;

use super::HarnessError;

/// Substrate and requests encoding an edge-disjoint paths instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdpReduction {
    /// SNs `0..n` are the graph's vertices, SN `n + i` is the copy of
    /// vertex `i`; SLs are the graph's edges, then the stems `(i, n + i)`.
    pub network: SubstrateNetwork,
    /// Request `k` asks to connect the copies of the ends of pair `k`.
    pub requests: Vec<VirtualRequest>,
}

impl EdpReduction {
    /// SN holding the copy of graph vertex `v`.
    pub fn copy_of(&self, v: NodeId) -> NodeId {
        self.network.node_count() / 2 + v
    }
}

fn overflow() -> HarnessError {
    HarnessError::Config("reduction capacities overflow 64 bits".into())
}

/// Encodes the edge-disjoint paths instance `(g, pairs)`.
///
/// Graph vertices get CPU 1 and graph edges bandwidth 1. Copy `i` gets CPU
/// `C_i * N_i` with `C_0 = 2` and `C_i = CPU(copy i-1) + 1`; stem `i` gets
/// bandwidth `B_i * N_i` with `B_{n-1} = 2` and `B_i = BW(stem i+1) + 1`,
/// where `N_i` counts the pairs ending at `i` (at least 1). Pair `(s, t)`
/// becomes a 4-VN path request with CPU `[C_s, 1, 1, C_t]` and bandwidth
/// `[B_s, 1, B_t]`, which forces its ends onto the copies of `s` and `t`.
pub fn gen_edp_reduction(g: &SimpleGraph, pairs: &[(usize, usize)]) -> Result<EdpReduction, HarnessError> {
    let n = g.node_count();
    if n == 0 || !g.is_connected() {
        return Err(HarnessError::Config("edge-disjoint paths input must be a connected graph".into()));
    }
    let mut count = vec![0u64; n];
    for &(s, t) in pairs {
        if s >= n || t >= n || s == t {
            return Err(HarnessError::Config(format!("bad terminal pair ({s}, {t})")));
        }
        count[s] += 1;
        count[t] += 1;
    }
    let occurrences: Vec<u64> = count.iter().map(|&c| c.max(1)).collect();

    let mut c = vec![0u64; n];
    let mut copy_cpu = vec![0u64; n];
    for i in 0..n {
        c[i] = if i == 0 { 2 } else { copy_cpu[i - 1].checked_add(1).ok_or_else(overflow)? };
        copy_cpu[i] = c[i].checked_mul(occurrences[i]).ok_or_else(overflow)?;
    }
    let mut b = vec![0u64; n];
    let mut stem_bw = vec![0u64; n];
    for i in (0..n).rev() {
        b[i] = if i == n - 1 { 2 } else { stem_bw[i + 1].checked_add(1).ok_or_else(overflow)? };
        stem_bw[i] = b[i].checked_mul(occurrences[i]).ok_or_else(overflow)?;
    }

    let mut cpu = vec![1u64; n];
    cpu.extend_from_slice(&copy_cpu);
    let links = g
        .edges()
        .iter()
        .map(|&(u, v)| (u, v, 1))
        .chain((0..n).map(|i| (i, n + i, stem_bw[i])));
    let network = SubstrateNetwork::new(cpu, links)?;
    let requests = pairs
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| VirtualRequest::path(k, vec![c[s], 1, 1, c[t]], vec![b[s], 1, b[t]], 1))
        .collect::<Result<_, _>>()?;
    Ok(EdpReduction { network, requests })
}

/// Encodes a cardinality `d`-dimensional knapsack as cycle requests on a
/// ring with one SN per dimension.
///
/// Instances with fewer than 3 dimensions are first padded to 3 with
/// dimensions of capacity `max(1, items)` and size 1, which never bind.
///
/// SN `i` gets CPU `K_i * b_i` with `K_0 = 1` and
/// `K_i = max_{k<i}(K_k * b_k) + 1`; every SL gets bandwidth equal to the
/// item count. Item `j` becomes a `d`-VN cycle request with CPU
/// `K_i * s_ji` on VN `i`, bandwidth 1 on every VL, and revenue 1. Every
/// size must be at least 1, since demands are positive.
pub fn gen_ddkp_reduction(inst: &MdkpInstance) -> Result<(SubstrateNetwork, Vec<VirtualRequest>), HarnessError> {
    let given = inst.capacities.len();
    if given == 0 {
        return Err(HarnessError::Config("knapsack has no dimension".into()));
    }
    let d = given.max(3);
    let filler = (inst.items.len() as u64).max(1);
    let mut capacities = inst.capacities.clone();
    capacities.resize(d, filler);
    for (j, it) in inst.items.iter().enumerate() {
        if it.sizes.len() != given {
            return Err(HarnessError::Config(format!("item {j} has {} sizes, expected {given}", it.sizes.len())));
        }
        if it.sizes.contains(&0) {
            return Err(HarnessError::Config(format!("item {j} has a zero size")));
        }
    }
    let mut k = vec![1u64; d];
    let mut cpu = vec![0u64; d];
    let mut largest = 0u64;
    for i in 0..d {
        if i > 0 {
            k[i] = largest.checked_add(1).ok_or_else(overflow)?;
        }
        cpu[i] = k[i].checked_mul(capacities[i]).ok_or_else(overflow)?;
        largest = largest.max(cpu[i]);
    }
    let bw = inst.items.len() as u64;
    let network = SubstrateNetwork::new(cpu, (0..d).map(|i| (i, (i + 1) % d, bw)))?;
    let requests = inst
        .items
        .iter()
        .enumerate()
        .map(|(j, it)| {
            let demands = it
                .sizes
                .iter()
                .chain(std::iter::repeat(&1))
                .zip(&k)
                .map(|(&s, &f)| s.checked_mul(f).ok_or_else(overflow))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(VirtualRequest::cycle(j, demands, vec![1; d], 1)?)
        })
        .collect::<Result<_, HarnessError>>()?;
    Ok((network, requests))
}
