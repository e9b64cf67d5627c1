use std::collections::HashSet;

use crate::model::{NodeId, SubstrateNetwork, VirtualRequest};

use super::{cap, SimpleGraph, TheoryError};

const TRAIL_NODE_CAP: usize = 12;
const EMBED_NODE_CAP: usize = 8;

/// True iff `g` has a trail (a walk repeating no edge) through every vertex.
///
/// Backtracks over trails from every start vertex, cutting a branch as soon
/// as some unvisited vertex is no longer reachable over unused edges.
pub fn has_spanning_trail(g: &SimpleGraph) -> Result<bool, TheoryError> {
    let n = g.node_count();
    cap("spanning trail vertices", n, TRAIL_NODE_CAP)?;
    if n <= 1 {
        return Ok(true);
    }
    if !g.is_connected() {
        return Ok(false);
    }
    let adj = g.adjacency();
    let full: u32 = (1 << n) - 1;
    Ok((0..n).any(|s| walk(&adj, s, 0, 1 << s, full)))
}

fn walk(adj: &[Vec<(usize, usize)>], v: usize, used: u128, visited: u32, full: u32) -> bool {
    if visited == full {
        return true;
    }
    if !reaches_rest(adj, v, used, visited, full) {
        return false;
    }
    for &(w, e) in &adj[v] {
        if used >> e & 1 == 0 && walk(adj, w, used | 1 << e, visited | 1 << w, full) {
            return true;
        }
    }
    false
}

fn reaches_rest(adj: &[Vec<(usize, usize)>], v: usize, used: u128, visited: u32, full: u32) -> bool {
    let mut seen: u32 = 1 << v;
    let mut stack = vec![v];
    while let Some(x) = stack.pop() {
        for &(w, e) in &adj[x] {
            if used >> e & 1 == 0 && seen >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    (seen | visited) == full
}

/// A substrate with CPU 2 on every SN and bandwidth 1 on every SL, and a
/// path request with unit demands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformInstance {
    pub network: SubstrateNetwork,
    pub request: VirtualRequest,
}

impl UniformInstance {
    /// `g` as a uniform substrate with a path request of `vns` VNs.
    pub fn new(g: &SimpleGraph, vns: usize) -> Result<Self, TheoryError> {
        let network = g.to_network(2, 1).map_err(|e| TheoryError::Shape(e.to_string()))?;
        let request = VirtualRequest::path(0, vec![1; vns], vec![1; vns.saturating_sub(1)], 1)
            .map_err(|e| TheoryError::Shape(e.to_string()))?;
        Ok(Self { network, request })
    }

    /// The request has as many VNs as the substrate has SNs.
    pub fn spanning(g: &SimpleGraph) -> Result<Self, TheoryError> {
        Self::new(g, g.node_count())
    }
}

/// Decides by exhaustive search whether the path request of `inst` embeds
/// on its substrate: every injective placement of the VNs, every choice of
/// simple substrate path per VL, under the substrate's capacities.
pub fn brute_force_path_embed(inst: &UniformInstance) -> Result<bool, TheoryError> {
    let net = &inst.network;
    let req = &inst.request;
    cap("path embedding SNs", net.node_count(), EMBED_NODE_CAP)?;
    if req.vn_count() == 0 {
        return Ok(true);
    }
    let mut search = PathSearch { net, req, failed: HashSet::new() };
    let cpu = net.cpu_capacities().to_vec();
    let bw = net.bw_capacities().to_vec();
    for s in 0..net.node_count() {
        if cpu[s] >= req.cpu(0) {
            let mut cpu = cpu.clone();
            cpu[s] -= req.cpu(0);
            if search.from(0, s, 1 << s, &mut cpu, &mut bw.clone()) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

struct PathSearch<'a> {
    net: &'a SubstrateNetwork,
    req: &'a VirtualRequest,
    failed: HashSet<(usize, NodeId, u32, Vec<u64>, Vec<u64>)>,
}

impl PathSearch<'_> {
    /// VN `i` sits on `host`; place the rest.
    fn from(&mut self, i: usize, host: NodeId, hosts: u32, cpu: &mut Vec<u64>, bw: &mut Vec<u64>) -> bool {
        if i + 1 == self.req.vn_count() {
            return true;
        }
        let key = (i, host, hosts, cpu.clone(), bw.clone());
        if self.failed.contains(&key) {
            return false;
        }
        let mut on_path = 1u32 << host;
        let ok = self.extend(i, hosts, host, &mut on_path, cpu, bw);
        if !ok {
            self.failed.insert(key);
        }
        ok
    }

    /// Grows the substrate path of VL `i` from `cur`; any SN reached that can
    /// host VN `i + 1` may end it.
    fn extend(
        &mut self,
        i: usize,
        hosts: u32,
        cur: NodeId,
        on_path: &mut u32,
        cpu: &mut Vec<u64>,
        bw: &mut Vec<u64>,
    ) -> bool {
        let demand = self.req.bw(i);
        let next_cpu = self.req.cpu(i + 1);
        for &(w, e) in self.net.neighbors(cur) {
            if *on_path >> w & 1 == 1 || bw[e] < demand {
                continue;
            }
            bw[e] -= demand;
            *on_path |= 1 << w;
            let mut found = false;
            if hosts >> w & 1 == 0 && cpu[w] >= next_cpu {
                cpu[w] -= next_cpu;
                found = self.from(i + 1, w, hosts | 1 << w, cpu, bw);
                cpu[w] += next_cpu;
            }
            if !found {
                found = self.extend(i, hosts, w, on_path, cpu, bw);
            }
            *on_path &= !(1 << w);
            bw[e] += demand;
            if found {
                return true;
            }
        }
        false
    }
}
