//! Cycle requests on a cycle substrate.
//!
//! A simplex embedding walks the substrate ring once in a fixed direction,
//! dropping the VNs in request order and routing each VL over the ring
//! segment up to the next VN. For one start SN and direction, all such
//! embeddings are the directed cycles of a layered auxiliary graph
//! ([`Wdag`]), so the cheapest one is a shortest-path style DP.
//! [`c2ce`] tries every start and both directions; [`greedy_revenue`]
//! embeds a request batch in revenue-per-resource order.

use serde::Serialize;
use thiserror::Error;

use crate::baseline::Embedder;
use crate::model::{
    CommitError, Direction, EdgeId, Embedding, EmbeddingBatch, ModelError, NodeId, Ring, Shape,
    SubstrateNetwork, VirtualRequest,
};

#[derive(Debug, Error)]
pub enum CycleError {
    #[error("substrate is not a single cycle")]
    NotACycleSubstrate,
    #[error("request {0} is not a cycle request")]
    NotACycleRequest(usize),
    #[error("start SN {start} cannot host the first VN of request {request}")]
    InfeasibleStart { request: usize, start: NodeId },
    #[error(transparent)]
    Commit(#[from] CommitError),
}

impl From<ModelError> for CycleError {
    fn from(_: ModelError) -> Self {
        CycleError::NotACycleSubstrate
    }
}

/// Per VN, the SNs with enough residual CPU; per VL, whether each SL has
/// enough residual bandwidth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleSets {
    nodes: Vec<Vec<NodeId>>,
    links: Vec<Vec<bool>>,
}

impl FeasibleSets {
    pub fn of(net: &SubstrateNetwork, req: &VirtualRequest) -> Self {
        let nodes = (0..req.vn_count())
            .map(|j| (0..net.node_count()).filter(|&v| net.residual_cpu(v) >= req.cpu(j)).collect())
            .collect();
        let links = (0..req.vl_count())
            .map(|k| (0..net.edge_count()).map(|e| net.residual_bw(e) >= req.bw(k)).collect())
            .collect();
        Self { nodes, links }
    }

    /// Feasible SNs of VN `j`, ascending.
    pub fn node_set(&self, j: usize) -> &[NodeId] {
        &self.nodes[j]
    }

    pub fn node_ok(&self, j: usize, v: NodeId) -> bool {
        self.nodes[j].binary_search(&v).is_ok()
    }

    pub fn link_ok(&self, k: usize, e: EdgeId) -> bool {
        self.links[k][e]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WdagVertex {
    pub layer: usize,
    pub sn: NodeId,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WdagArc {
    pub from: usize,
    pub to: usize,
    /// SLs in the ring segment the arc stands for.
    pub hops: usize,
    /// `hops` times the bandwidth demand of the VL.
    pub weight: u64,
    /// Arc from the last layer back to the start vertex.
    pub closing: bool,
}

/// Layered auxiliary graph for one start SN and one direction.
///
/// Layer `j` holds one vertex per SN that may host VN `j`; layer 0 is just
/// the start SN (vertex 0). Arcs join consecutive layers when the second SN
/// lies strictly further along the ring and every SL between them can carry
/// the VL; closing arcs lead from the last layer back to vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wdag {
    pub start: NodeId,
    pub dir: Direction,
    /// SNs of the ring in visiting order from `start`.
    pub seq_nodes: Vec<NodeId>,
    /// `seq_edges[k]` joins `seq_nodes[k]` and `seq_nodes[(k + 1) % m]`.
    pub seq_edges: Vec<EdgeId>,
    pub vertices: Vec<WdagVertex>,
    /// Vertex ids per layer, ascending by SN id.
    pub layers: Vec<Vec<usize>>,
    pub arcs: Vec<WdagArc>,
}

/// A directed cycle of a [`Wdag`]: one vertex per layer, starting at vertex
/// 0, plus its total weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdagCycle {
    pub vertices: Vec<usize>,
    pub weight: u64,
}

/// A one-direction, one-lap embedding of a cycle request.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplexEmbedding {
    pub request: usize,
    pub start: NodeId,
    pub dir: Direction,
    /// Host SN of each VN.
    pub hosts: Vec<NodeId>,
    /// SLs of each VL, walking from its first to its second VN.
    pub segments: Vec<Vec<EdgeId>>,
    /// Total bandwidth consumed.
    pub cost: u64,
}

impl SimplexEmbedding {
    pub fn to_embedding(&self) -> Embedding {
        Embedding { request: self.request, node_map: self.hosts.clone(), link_map: self.segments.clone() }
    }
}

fn check_shapes(net: &SubstrateNetwork, req: &VirtualRequest) -> Result<Ring, CycleError> {
    if req.shape() != Shape::Cycle {
        return Err(CycleError::NotACycleRequest(req.id()));
    }
    Ok(Ring::of(net)?)
}

/// Builds the auxiliary graph of `req` for `start` and `dir` on the current
/// residuals of the cycle substrate `net`.
pub fn build_wdag(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    start: NodeId,
    dir: Direction,
) -> Result<Wdag, CycleError> {
    let ring = check_shapes(net, req)?;
    let sets = FeasibleSets::of(net, req);
    if start >= net.node_count() || !sets.node_ok(0, start) {
        return Err(CycleError::InfeasibleStart { request: req.id(), start });
    }
    Ok(build_with(&ring, &sets, req, start, dir))
}

fn build_with(ring: &Ring, sets: &FeasibleSets, req: &VirtualRequest, start: NodeId, dir: Direction) -> Wdag {
    let m = ring.len();
    let n = req.vn_count();
    let seq_nodes = ring.seq(start, dir);
    let seq_edges: Vec<EdgeId> = (0..m).map(|k| ring.seq_edge(start, dir, k)).collect();
    let idx = |v: NodeId| ring.seq_index(start, dir, v);

    let mut vertices = vec![WdagVertex { layer: 0, sn: start }];
    let mut layers = vec![vec![0]];
    for j in 1..n {
        let mut layer = Vec::new();
        for &v in sets.node_set(j) {
            if v != start {
                layer.push(vertices.len());
                vertices.push(WdagVertex { layer: j, sn: v });
            }
        }
        layers.push(layer);
    }

    // a segment [a, b) of sequence positions can carry VL k
    let segment_ok = |k: usize, a: usize, b: usize| (a..b).all(|p| sets.link_ok(k, seq_edges[p]));

    let mut arcs = Vec::new();
    let mut reached = vec![false; vertices.len()];
    reached[0] = true;
    for j in 1..n {
        for &u in &layers[j - 1] {
            let iu = idx(vertices[u].sn);
            for &v in &layers[j] {
                let iv = idx(vertices[v].sn);
                if iv > iu && segment_ok(j - 1, iu, iv) {
                    let hops = iv - iu;
                    arcs.push(WdagArc { from: u, to: v, hops, weight: hops as u64 * req.bw(j - 1), closing: false });
                    reached[v] = true;
                }
            }
        }
        if !layers[j].iter().any(|&v| reached[v]) {
            return Wdag { start, dir, seq_nodes, seq_edges, vertices, layers, arcs };
        }
    }
    for &u in &layers[n - 1] {
        let iu = idx(vertices[u].sn);
        if iu > 0 && segment_ok(n - 1, iu, m) {
            let hops = m - iu;
            arcs.push(WdagArc { from: u, to: 0, hops, weight: hops as u64 * req.bw(n - 1), closing: true });
        }
    }
    Wdag { start, dir, seq_nodes, seq_edges, vertices, layers, arcs }
}

impl Wdag {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Position of `v` in the visiting order from `start`.
    pub fn seq_index(&self, v: NodeId) -> usize {
        self.seq_nodes.iter().position(|&x| x == v).expect("SN on ring")
    }

    /// Maps a directed cycle (one vertex per layer) back to the simplex
    /// embedding it stands for.
    pub fn embedding_of(&self, request: usize, cycle: &WdagCycle) -> SimplexEmbedding {
        let m = self.seq_nodes.len();
        let hosts: Vec<NodeId> = cycle.vertices.iter().map(|&v| self.vertices[v].sn).collect();
        let n = hosts.len();
        let segments = (0..n)
            .map(|j| {
                let a = self.seq_index(hosts[j]);
                let b = if j + 1 == n { m } else { self.seq_index(hosts[j + 1]) };
                self.seq_edges[a..b].to_vec()
            })
            .collect();
        SimplexEmbedding { request, start: self.start, dir: self.dir, hosts, segments, cost: cycle.weight }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("wdag serialises")
    }
}

/// Cheapest directed cycle through vertex 0, or `None` when there is none.
///
/// Ties go to the cycle whose vertex sequence (equivalently SN sequence) is
/// lexicographically smallest.
pub fn min_weight_cycle(w: &Wdag) -> Option<WdagCycle> {
    let n = w.layers.len();
    let nv = w.vertices.len();
    // out-arcs per vertex, ascending by target
    let mut out: Vec<Vec<&WdagArc>> = vec![Vec::new(); nv];
    for a in &w.arcs {
        out[a.from].push(a);
    }
    for o in &mut out {
        o.sort_by_key(|a| a.to);
    }
    // cost from each vertex along the remaining layers and back to vertex 0
    let mut to_go: Vec<Option<u64>> = vec![None; nv];
    for &u in &w.layers[n - 1] {
        to_go[u] = out[u].iter().find(|a| a.closing).map(|a| a.weight);
    }
    for j in (0..n - 1).rev() {
        for &u in &w.layers[j] {
            to_go[u] = out[u]
                .iter()
                .filter(|a| !a.closing)
                .filter_map(|a| to_go[a.to].map(|c| c + a.weight))
                .min();
        }
    }
    let weight = to_go[0]?;
    let mut vertices = vec![0];
    let mut cur = 0;
    let mut left = weight;
    for _ in 1..n {
        let a = out[cur]
            .iter()
            .filter(|a| !a.closing)
            .find(|a| to_go[a.to].is_some_and(|c| c + a.weight == left))
            .expect("optimal successor exists");
        left -= a.weight;
        cur = a.to;
        vertices.push(cur);
    }
    Some(WdagCycle { vertices, weight })
}

/// Cheapest simplex embedding of `req` over the given directions, trying
/// starts in ascending SN id and directions in the order given. Only
/// strictly cheaper embeddings replace the incumbent.
fn c2ce_over(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    dirs: &[Direction],
) -> Result<Option<SimplexEmbedding>, CycleError> {
    let ring = check_shapes(net, req)?;
    let sets = FeasibleSets::of(net, req);
    let mut best: Option<SimplexEmbedding> = None;
    for &start in sets.node_set(0) {
        for &dir in dirs {
            let w = build_with(&ring, &sets, req, start, dir);
            if let Some(c) = min_weight_cycle(&w) {
                if best.as_ref().is_none_or(|b| c.weight < b.cost) {
                    best = Some(w.embedding_of(req.id(), &c));
                }
            }
        }
    }
    Ok(best)
}

/// Minimum-bandwidth simplex embedding of a cycle request on a cycle
/// substrate, against current residuals. `None` when no simplex embedding
/// exists.
pub fn c2ce(net: &SubstrateNetwork, req: &VirtualRequest) -> Result<Option<SimplexEmbedding>, CycleError> {
    c2ce_over(net, req, &Direction::BOTH)
}

/// [`c2ce`] restricted to one direction.
pub fn c2ce_directed(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    dir: Direction,
) -> Result<Option<SimplexEmbedding>, CycleError> {
    c2ce_over(net, req, &[dir])
}

/// `revenue / (total CPU + total BW)` of `a` against `b`, descending.
fn by_ratio(a: &VirtualRequest, b: &VirtualRequest) -> std::cmp::Ordering {
    let ca = a.total_cpu() as u128 + a.total_bw() as u128;
    let cb = b.total_cpu() as u128 + b.total_bw() as u128;
    (b.revenue() as u128 * ca).cmp(&(a.revenue() as u128 * cb))
}

#[derive(Debug, Clone)]
pub struct GrOutcome {
    pub batch: EmbeddingBatch,
    /// Ids of requests embedded by [`c2ce`], in commit order.
    pub via_c2ce: Vec<usize>,
    /// Ids of requests embedded by the fallback, in commit order.
    pub via_fallback: Vec<usize>,
}

/// Embeds cycle requests in descending revenue-per-resource order with
/// [`c2ce`], committing each on `net`; what is left is then offered once,
/// in the same order, to `fallback`.
///
/// Residuals only shrink, so a request that fails [`c2ce`] once would fail
/// again later and a single pass finds every request [`c2ce`] can still
/// place.
pub fn greedy_revenue(
    net: &mut SubstrateNetwork,
    requests: &[VirtualRequest],
    fallback: Option<&dyn Embedder>,
) -> Result<GrOutcome, CycleError> {
    if let Some(r) = requests.iter().find(|r| r.shape() != Shape::Cycle) {
        return Err(CycleError::NotACycleRequest(r.id()));
    }
    Ring::of(net)?;
    let mut order: Vec<&VirtualRequest> = requests.iter().collect();
    order.sort_by(|a, b| by_ratio(a, b));
    let mut batch = EmbeddingBatch::new(net);
    let mut via_c2ce = Vec::new();
    let mut rest = Vec::new();
    for req in order {
        match c2ce(net, req)? {
            Some(s) => {
                batch.commit(net, req, s.to_embedding())?;
                via_c2ce.push(req.id());
            }
            None => rest.push(req),
        }
    }
    let mut via_fallback = Vec::new();
    if let Some(fb) = fallback {
        for req in rest {
            if let Some(emb) = fb.embed(net, req) {
                batch.commit(net, req, emb)?;
                via_fallback.push(req.id());
            }
        }
    }
    Ok(GrOutcome { batch, via_c2ce, via_fallback })
}

/// Embeds cycle requests in the order given, with [`c2ce`] only.
pub fn c2ce_in_order(net: &mut SubstrateNetwork, requests: &[VirtualRequest]) -> Result<EmbeddingBatch, CycleError> {
    let mut batch = EmbeddingBatch::new(net);
    for req in requests {
        if let Some(s) = c2ce(net, req)? {
            batch.commit(net, req, s.to_embedding())?;
        }
    }
    Ok(batch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_embedding;

    fn ring(cpu: Vec<u64>, bw: u64) -> SubstrateNetwork {
        let m = cpu.len();
        SubstrateNetwork::new(cpu, (0..m).map(|i| (i, (i + 1) % m, bw))).unwrap()
    }

    /// Ring 0-1-2-3 where the cheapest clockwise embedding costs 8 and the
    /// cheapest anticlockwise one costs 9.
    fn nine_vs_eight() -> (SubstrateNetwork, VirtualRequest) {
        let net = ring(vec![3, 3, 1, 2], 3);
        let req = VirtualRequest::cycle(0, vec![3, 3, 2], vec![1, 2, 3], 1).unwrap();
        (net, req)
    }

    #[test]
    fn directional_minimums() {
        let (net, req) = nine_vs_eight();
        let cw = c2ce_directed(&net, &req, Direction::Clockwise).unwrap().unwrap();
        let acw = c2ce_directed(&net, &req, Direction::Anticlockwise).unwrap().unwrap();
        assert_eq!((cw.cost, acw.cost), (8, 9));
        let best = c2ce(&net, &req).unwrap().unwrap();
        assert_eq!(best.cost, 8);
        assert_eq!(best.dir, Direction::Clockwise);
        let w = build_wdag(&net, &req, 0, Direction::Clockwise).unwrap();
        assert_eq!(min_weight_cycle(&w).unwrap().weight, 8);
        assert!(validate_embedding(&net, &req, &best.to_embedding()).unwrap().is_feasible());
    }

    #[test]
    fn forced_single_hops_cost_sum_of_demands() {
        let net = ring(vec![5; 4], 5);
        let req = VirtualRequest::cycle(0, vec![1; 4], vec![2, 3, 1, 4], 1).unwrap();
        let s = c2ce(&net, &req).unwrap().unwrap();
        assert_eq!(s.cost, 10);
        assert!(s.segments.iter().all(|seg| seg.len() == 1));
    }

    #[test]
    fn empty_layer_means_no_cycle() {
        let net = ring(vec![2; 5], 5);
        let req = VirtualRequest::cycle(0, vec![1, 3, 1], vec![1; 3], 1).unwrap();
        let w = build_wdag(&net, &req, 0, Direction::Clockwise).unwrap();
        assert!(w.layers[1].is_empty());
        assert_eq!(min_weight_cycle(&w), None);
        assert_eq!(c2ce(&net, &req).unwrap(), None);
    }

    #[test]
    fn single_chain() {
        // m = n = 3 from start 0 clockwise has exactly one cycle
        let net = ring(vec![5; 3], 5);
        let req = VirtualRequest::cycle(0, vec![1; 3], vec![1, 1, 1], 1).unwrap();
        let w = build_wdag(&net, &req, 0, Direction::Clockwise).unwrap();
        let c = min_weight_cycle(&w).unwrap();
        let sns: Vec<_> = c.vertices.iter().map(|&v| w.vertices[v].sn).collect();
        assert_eq!(sns, vec![0, 1, 2]);
        assert_eq!(c.weight, 3);
    }

    #[test]
    fn shape_errors() {
        let path = SubstrateNetwork::new(vec![5; 3], [(0, 1, 1), (1, 2, 1)]).unwrap();
        let req = VirtualRequest::cycle(0, vec![1; 3], vec![1; 3], 1).unwrap();
        assert!(matches!(c2ce(&path, &req), Err(CycleError::NotACycleSubstrate)));
        let net = ring(vec![5; 4], 5);
        let p = VirtualRequest::path(4, vec![1; 3], vec![1; 2], 1).unwrap();
        assert!(matches!(c2ce(&net, &p), Err(CycleError::NotACycleRequest(4))));
        assert!(matches!(
            build_wdag(&net, &req, 9, Direction::Clockwise),
            Err(CycleError::InfeasibleStart { start: 9, .. })
        ));
    }

    #[test]
    fn revenue_order_wins_contention() {
        let mut net = ring(vec![1; 3], 5);
        let low = VirtualRequest::cycle(0, vec![1; 3], vec![1; 3], 1).unwrap();
        let high = VirtualRequest::cycle(1, vec![1; 3], vec![1; 3], 10).unwrap();
        let out = greedy_revenue(&mut net, &[low, high], None).unwrap();
        assert_eq!(out.via_c2ce, vec![1]);
        assert_eq!(out.batch.revenue(), 10);
        let mut net = ring(vec![1; 3], 5);
        assert!(greedy_revenue(&mut net, &[], None).unwrap().batch.is_empty());
    }
}
