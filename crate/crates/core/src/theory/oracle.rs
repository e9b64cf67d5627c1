use std::collections::BTreeSet;

use crate::model::{Direction, EdgeId, Embedding, NodeId, Ring, Shape, SubstrateNetwork, VirtualRequest};

use super::{cap, TheoryError};

const SIMPLEX_RING_CAP: usize = 8;
const SIMPLEX_VN_CAP: usize = 5;
const EMBED_NODE_CAP: usize = 8;
const EMBED_VN_CAP: usize = 6;
const ACCEPT_REQUEST_CAP: usize = 12;

/// One way to lay a cycle request once around a ring: a start SN (hosting
/// VN 0), a direction, and the ring positions of the other VNs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexTableau {
    pub start: NodeId,
    pub dir: Direction,
    /// Position of each VN along the ring from `start`; `positions[0] == 0`.
    pub positions: Vec<usize>,
    pub hosts: Vec<NodeId>,
    pub segments: Vec<Vec<EdgeId>>,
    /// Every host has the CPU and every SL of every segment the bandwidth.
    pub feasible: bool,
    pub cost: u64,
}

impl SimplexTableau {
    pub fn to_embedding(&self, request: usize) -> Embedding {
        Embedding { request, node_map: self.hosts.clone(), link_map: self.segments.clone() }
    }
}

fn increasing_choices(from: usize, to: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(next: usize, to: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in next..to {
            cur.push(p);
            go(p + 1, to, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(from, to, k, &mut Vec::new(), &mut out);
    out
}

/// Every tableau whose start SN has the residual CPU for VN 0, for both
/// directions and every strictly increasing choice of positions, feasible
/// or not. There are `2 * |starts| * C(m - 1, n - 1)` of them.
pub fn simplex_tableaus(net: &SubstrateNetwork, req: &VirtualRequest) -> Result<Vec<SimplexTableau>, TheoryError> {
    let ring = Ring::of(net).map_err(|e| TheoryError::Shape(e.to_string()))?;
    if req.shape() != Shape::Cycle {
        return Err(TheoryError::Shape(format!("request {} is not a cycle", req.id())));
    }
    let m = ring.len();
    let n = req.vn_count();
    cap("simplex ring SNs", m, SIMPLEX_RING_CAP)?;
    cap("simplex request VNs", n, SIMPLEX_VN_CAP)?;
    let mut out = Vec::new();
    for start in 0..m {
        if net.residual_cpu(start) < req.cpu(0) {
            continue;
        }
        for dir in Direction::BOTH {
            for rest in increasing_choices(1, m, n - 1) {
                let mut positions = vec![0];
                positions.extend(rest);
                let hosts: Vec<NodeId> = positions.iter().map(|&p| ring.seq_node(start, dir, p)).collect();
                let mut feasible = hosts.iter().enumerate().all(|(j, &v)| net.residual_cpu(v) >= req.cpu(j));
                let mut segments = Vec::with_capacity(n);
                let mut cost = 0;
                for j in 0..n {
                    let end = if j + 1 == n { m } else { positions[j + 1] };
                    let seg: Vec<EdgeId> = (positions[j]..end).map(|p| ring.seq_edge(start, dir, p)).collect();
                    feasible &= seg.iter().all(|&e| net.residual_bw(e) >= req.bw(j));
                    cost += seg.len() as u64 * req.bw(j);
                    segments.push(seg);
                }
                out.push(SimplexTableau { start, dir, positions, hosts, segments, feasible, cost });
            }
        }
    }
    Ok(out)
}

/// Cheapest feasible tableau by exhaustive enumeration, with its cost.
pub fn brute_force_simplex_cycle(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
) -> Result<Option<(u64, Embedding)>, TheoryError> {
    let best = simplex_tableaus(net, req)?
        .into_iter()
        .filter(|t| t.feasible)
        .min_by_key(|t| t.cost);
    Ok(best.map(|t| (t.cost, t.to_embedding(req.id()))))
}

/// All node-simple SL sequences from `a` to `b`.
fn simple_paths(net: &SubstrateNetwork, a: NodeId, b: NodeId) -> Vec<Vec<EdgeId>> {
    fn go(
        net: &SubstrateNetwork,
        cur: NodeId,
        b: NodeId,
        seen: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
        out: &mut Vec<Vec<EdgeId>>,
    ) {
        if cur == b {
            out.push(path.clone());
            return;
        }
        for &(w, e) in net.neighbors(cur) {
            if !seen[w] {
                seen[w] = true;
                path.push(e);
                go(net, w, b, seen, path, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; net.node_count()];
    seen[a] = true;
    let mut out = Vec::new();
    go(net, a, b, &mut seen, &mut Vec::new(), &mut out);
    out
}

/// Every embedding of `req` that fits the residuals of `net`: injective
/// node maps with enough CPU and, per VL, any simple path, with the
/// bandwidth of SLs shared by several VLs of the request added up.
pub fn enumerate_embeddings(net: &SubstrateNetwork, req: &VirtualRequest) -> Result<Vec<Embedding>, TheoryError> {
    cap("embedding enumeration SNs", net.node_count(), EMBED_NODE_CAP)?;
    cap("embedding enumeration VNs", req.vn_count(), EMBED_VN_CAP)?;
    let mut maps = Vec::new();
    place_nodes(net, req, &mut Vec::new(), &mut maps);
    let mut out = Vec::new();
    for node_map in maps {
        let options: Vec<Vec<Vec<EdgeId>>> = (0..req.vl_count())
            .map(|k| {
                let (a, b) = req.link(k);
                simple_paths(net, node_map[a], node_map[b])
            })
            .collect();
        let mut bw = net.residual_bws().to_vec();
        route_links(req, &options, &mut bw, &mut Vec::new(), &node_map, &mut out);
    }
    Ok(out)
}

fn place_nodes(net: &SubstrateNetwork, req: &VirtualRequest, cur: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
    let j = cur.len();
    if j == req.vn_count() {
        out.push(cur.clone());
        return;
    }
    for v in 0..net.node_count() {
        if !cur.contains(&v) && net.residual_cpu(v) >= req.cpu(j) {
            cur.push(v);
            place_nodes(net, req, cur, out);
            cur.pop();
        }
    }
}

fn route_links(
    req: &VirtualRequest,
    options: &[Vec<Vec<EdgeId>>],
    bw: &mut [u64],
    cur: &mut Vec<Vec<EdgeId>>,
    node_map: &[NodeId],
    out: &mut Vec<Embedding>,
) {
    let k = cur.len();
    if k == options.len() {
        out.push(Embedding { request: req.id(), node_map: node_map.to_vec(), link_map: cur.clone() });
        return;
    }
    let d = req.bw(k);
    for path in &options[k] {
        if path.iter().all(|&e| bw[e] >= d) {
            for &e in path {
                bw[e] -= d;
            }
            cur.push(path.clone());
            route_links(req, options, bw, cur, node_map, out);
            cur.pop();
            for &e in path {
                bw[e] += d;
            }
        }
    }
}

/// CPU per SN followed by bandwidth per SL consumed by `emb`.
fn usage_vector(net: &SubstrateNetwork, req: &VirtualRequest, emb: &Embedding) -> Vec<u64> {
    let nv = net.node_count();
    let mut u = vec![0u64; nv + net.edge_count()];
    for (j, &v) in emb.node_map.iter().enumerate() {
        u[v] += req.cpu(j);
    }
    for (k, path) in emb.link_map.iter().enumerate() {
        for &e in path {
            u[nv + e] += req.bw(k);
        }
    }
    u
}

/// Largest number of `requests` that embed together on the residuals of
/// `net`, considering every embedding [`enumerate_embeddings`] produces,
/// with the ids of one largest set.
///
/// Usage vectors that use at least as much of everything as another option
/// of the same request are dropped before the search.
pub fn max_acceptance(net: &SubstrateNetwork, requests: &[VirtualRequest]) -> Result<(usize, Vec<usize>), TheoryError> {
    cap("acceptance requests", requests.len(), ACCEPT_REQUEST_CAP)?;
    let options: Vec<Vec<Vec<u64>>> = requests
        .iter()
        .map(|r| {
            let uses: BTreeSet<Vec<u64>> =
                enumerate_embeddings(net, r)?.iter().map(|e| usage_vector(net, r, e)).collect();
            Ok(undominated(uses.into_iter().collect()))
        })
        .collect::<Result<_, TheoryError>>()?;
    let mut avail = net.residual_cpus().to_vec();
    avail.extend_from_slice(net.residual_bws());
    let mut best = (0, Vec::new());
    accept(&options, 0, &mut avail, &mut Vec::new(), &mut best);
    let ids = best.1.iter().map(|&i| requests[i].id()).collect();
    Ok((best.0, ids))
}

fn undominated(uses: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let covers = |a: &Vec<u64>, b: &Vec<u64>| a != b && a.iter().zip(b).all(|(x, y)| x <= y);
    uses.iter().filter(|u| !uses.iter().any(|o| covers(o, u))).cloned().collect()
}

fn accept(
    options: &[Vec<Vec<u64>>],
    i: usize,
    avail: &mut [u64],
    chosen: &mut Vec<usize>,
    best: &mut (usize, Vec<usize>),
) {
    if chosen.len() > best.0 {
        *best = (chosen.len(), chosen.clone());
    }
    if i == options.len() || best.0 == options.len() || chosen.len() + (options.len() - i) <= best.0 {
        return;
    }
    for use_vec in &options[i] {
        if use_vec.iter().zip(avail.iter()).all(|(u, a)| u <= a) {
            for (a, u) in avail.iter_mut().zip(use_vec) {
                *a -= u;
            }
            chosen.push(i);
            accept(options, i + 1, avail, chosen, best);
            chosen.pop();
            for (a, u) in avail.iter_mut().zip(use_vec) {
                *a += u;
            }
        }
    }
    accept(options, i + 1, avail, chosen, best);
}
