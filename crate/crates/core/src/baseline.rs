//! A topology-agnostic embedder used as the comparison arm in experiments
//! and as the fallback of [`crate::cycle::greedy_revenue`].
//!
//! Nodes first: VNs in descending CPU demand go to the best-ranked SN that
//! can still host them. Links second: each VL takes a fewest-hop path over
//! SLs with enough residual bandwidth, ties broken by lexicographically
//! smallest SN sequence.

use std::collections::VecDeque;

use crate::model::{CommitError, EdgeId, Embedding, EmbeddingBatch, NodeId, SubstrateNetwork, VirtualRequest};

/// Anything that proposes an embedding for one request on current residuals.
pub trait Embedder {
    fn name(&self) -> &str;

    /// A feasible embedding against the residuals of `net`, or `None`.
    fn embed(&self, net: &SubstrateNetwork, req: &VirtualRequest) -> Option<Embedding>;
}

/// Per-SN score: residual CPU times the residual bandwidth of incident SLs,
/// optionally averaged once with the mean score of the neighbors.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRankVector {
    pub scores: Vec<f64>,
}

impl NodeRankVector {
    pub fn compute(net: &SubstrateNetwork, smoothing: bool) -> Self {
        let raw: Vec<f64> = (0..net.node_count())
            .map(|v| {
                let bw: u64 = net.neighbors(v).iter().map(|&(_, e)| net.residual_bw(e)).sum();
                net.residual_cpu(v) as f64 * bw as f64
            })
            .collect();
        if !smoothing {
            return Self { scores: raw };
        }
        let scores = (0..net.node_count())
            .map(|v| {
                let nb = net.neighbors(v);
                if nb.is_empty() {
                    return raw[v];
                }
                let mean = nb.iter().map(|&(w, _)| raw[w]).sum::<f64>() / nb.len() as f64;
                (raw[v] + mean) / 2.0
            })
            .collect();
        Self { scores }
    }

    /// SN ids from best to worst score, lower id first on ties.
    pub fn ranking(&self) -> Vec<NodeId> {
        let mut order: Vec<NodeId> = (0..self.scores.len()).collect();
        order.sort_by(|&a, &b| self.scores[b].total_cmp(&self.scores[a]).then(a.cmp(&b)));
        order
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericEmbedder {
    pub smoothing: bool,
}

impl Default for GenericEmbedder {
    fn default() -> Self {
        Self { smoothing: true }
    }
}

impl Embedder for GenericEmbedder {
    fn name(&self) -> &str {
        "generic"
    }

    fn embed(&self, net: &SubstrateNetwork, req: &VirtualRequest) -> Option<Embedding> {
        generic_embed(net, req, self.smoothing)
    }
}

/// Fewest-hop path from `from` to `to` over SLs whose bandwidth in `avail`
/// is at least `demand`. Among shortest paths, the one whose SN sequence is
/// lexicographically smallest.
pub(crate) fn shortest_feasible_path(
    net: &SubstrateNetwork,
    avail: &[u64],
    demand: u64,
    from: NodeId,
    to: NodeId,
) -> Option<Vec<EdgeId>> {
    let mut dist = vec![usize::MAX; net.node_count()];
    dist[to] = 0;
    let mut queue = VecDeque::from([to]);
    while let Some(v) = queue.pop_front() {
        if v == from {
            break;
        }
        for &(w, e) in net.neighbors(v) {
            if avail[e] >= demand && dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist[from] == usize::MAX {
        return None;
    }
    let mut path = Vec::with_capacity(dist[from]);
    let mut cur = from;
    while cur != to {
        // neighbors are sorted by id, so the first closer one is the smallest
        let &(next, e) = net
            .neighbors(cur)
            .iter()
            .find(|&&(w, e)| avail[e] >= demand && dist[w] != usize::MAX && dist[w] + 1 == dist[cur])?;
        path.push(e);
        cur = next;
    }
    Some(path)
}

/// Embeds `req` with the generic heuristic against the residuals of `net`.
pub fn generic_embed(net: &SubstrateNetwork, req: &VirtualRequest, smoothing: bool) -> Option<Embedding> {
    let ranking = NodeRankVector::compute(net, smoothing).ranking();
    let mut vns: Vec<usize> = (0..req.vn_count()).collect();
    vns.sort_by(|&a, &b| req.cpu(b).cmp(&req.cpu(a)).then(a.cmp(&b)));
    let mut taken = vec![false; net.node_count()];
    let mut node_map = vec![0; req.vn_count()];
    for vn in vns {
        let &sn = ranking.iter().find(|&&v| !taken[v] && net.residual_cpu(v) >= req.cpu(vn))?;
        taken[sn] = true;
        node_map[vn] = sn;
    }
    let mut avail = net.residual_bws().to_vec();
    let mut link_map = Vec::with_capacity(req.vl_count());
    for k in 0..req.vl_count() {
        let (a, b) = req.link(k);
        let path = shortest_feasible_path(net, &avail, req.bw(k), node_map[a], node_map[b])?;
        for &e in &path {
            avail[e] -= req.bw(k);
        }
        link_map.push(path);
    }
    Some(Embedding { request: req.id(), node_map, link_map })
}

/// Offers each request in input order to `embedder`, committing successes.
pub fn generic_batch(
    net: &mut SubstrateNetwork,
    requests: &[VirtualRequest],
    embedder: &dyn Embedder,
) -> Result<EmbeddingBatch, CommitError> {
    let mut batch = EmbeddingBatch::new(net);
    for req in requests {
        if let Some(emb) = embedder.embed(net, req) {
            batch.commit(net, req, emb)?;
        }
    }
    Ok(batch)
}
