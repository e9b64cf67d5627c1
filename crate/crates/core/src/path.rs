//! Path requests on general substrates: decompose the substrate into
//! SL-disjoint paths, pack requests onto them as a multiple knapsack, then
//! fund the packed requests with a multi-dimensional knapsack over residual
//! CPU and bandwidth. [`procedure_pe`] repeats the three steps until a round
//! embeds nothing.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::knapsack::{
    solve_mdkp, solve_mkp, KnapsackError, KpItem, MdkpInstance, MdkpItem, MkpInstance, SolveMode,
};
use crate::model::{
    CommitError, EdgeId, Embedding, EmbeddingBatch, NodeId, Shape, SubstrateNetwork, VirtualRequest,
};

#[derive(Debug, Error)]
pub enum PathError {
    #[error("request {0} is not a path request")]
    NotAPath(usize),
    #[error(transparent)]
    Knapsack(#[from] KnapsackError),
    #[error(transparent)]
    Commit(#[from] CommitError),
}

/// A simple path of the substrate, as its SNs and the SLs joining them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubstratePath {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl SubstratePath {
    /// Number of SLs.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }
}

/// An SL is usable while it has bandwidth left and both of its SNs have CPU
/// left.
fn usable(net: &SubstrateNetwork, e: EdgeId) -> bool {
    let (u, v) = net.endpoints(e);
    net.residual_bw(e) > 0 && net.residual_cpu(u) > 0 && net.residual_cpu(v) > 0
}

/// Splits the usable SLs of `net` into SL-disjoint paths.
///
/// Each round roots a depth-first tree at the SN of highest remaining degree
/// (lowest id on ties), takes the longest path of that tree, and deletes its
/// SLs. Every returned path runs from its lower-id end to its higher-id end.
pub fn decompose_paths(net: &SubstrateNetwork) -> Vec<SubstratePath> {
    let n = net.node_count();
    let mut adj: Vec<BTreeSet<(NodeId, EdgeId)>> = vec![BTreeSet::new(); n];
    for e in (0..net.edge_count()).filter(|&e| usable(net, e)) {
        let (u, v) = net.endpoints(e);
        adj[u].insert((v, e));
        adj[v].insert((u, e));
    }
    let mut paths = Vec::new();
    while let Some(root) = (0..n).filter(|&v| !adj[v].is_empty()).max_by(|&a, &b| {
        adj[a].len().cmp(&adj[b].len()).then(b.cmp(&a))
    }) {
        let tree = dfs_tree(&adj, root);
        let path = tree_diameter(&tree, root);
        for (w, &e) in path.nodes.windows(2).zip(&path.edges) {
            adj[w[0]].remove(&(w[1], e));
            adj[w[1]].remove(&(w[0], e));
        }
        paths.push(path);
    }
    paths
}

/// Tree adjacency (node -> children and parent, with SL ids) of an
/// iterative DFS that explores neighbors in ascending id order.
fn dfs_tree(adj: &[BTreeSet<(NodeId, EdgeId)>], root: NodeId) -> Vec<Vec<(NodeId, EdgeId)>> {
    let n = adj.len();
    let mut tree = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut stack = vec![(root, adj[root].iter())];
    while let Some((v, it)) = stack.last_mut() {
        let v = *v;
        match it.find(|(w, _)| !seen[*w]) {
            Some(&(w, e)) => {
                seen[w] = true;
                tree[v].push((w, e));
                tree[w].push((v, e));
                stack.push((w, adj[w].iter()));
            }
            None => {
                stack.pop();
            }
        }
    }
    tree
}

/// BFS over `tree` from `from`: the farthest node (lowest id on ties) and
/// the parent links to reconstruct paths.
fn farthest(tree: &[Vec<(NodeId, EdgeId)>], from: NodeId) -> (NodeId, Vec<Option<(NodeId, EdgeId)>>) {
    let mut dist = vec![usize::MAX; tree.len()];
    let mut parent = vec![None; tree.len()];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    let mut best = from;
    while let Some(v) = queue.pop_front() {
        if dist[v] > dist[best] || (dist[v] == dist[best] && v < best) {
            best = v;
        }
        for &(w, e) in &tree[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                parent[w] = Some((v, e));
                queue.push_back(w);
            }
        }
    }
    (best, parent)
}

fn tree_diameter(tree: &[Vec<(NodeId, EdgeId)>], root: NodeId) -> SubstratePath {
    let (a, _) = farthest(tree, root);
    let (b, parent) = farthest(tree, a);
    let mut nodes = vec![b];
    let mut edges = Vec::new();
    let mut cur = b;
    while let Some((p, e)) = parent[cur] {
        nodes.push(p);
        edges.push(e);
        cur = p;
    }
    if nodes[0] > nodes[nodes.len() - 1] {
        nodes.reverse();
        edges.reverse();
    }
    SubstratePath { nodes, edges }
}

/// One request laid onto a segment of a decomposed substrate path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathPlacement {
    /// Index into the request slice given to [`pack_mkp`].
    pub request: usize,
    /// Index into the path list given to [`pack_mkp`].
    pub path: usize,
    /// SN position on the path that hosts the request's first VN.
    pub offset: usize,
    pub embedding: Embedding,
}

/// Packs path requests onto `paths` as a multiple knapsack: each request is
/// an item with its VL count as size and its revenue as profit; each path is
/// a knapsack with its SL count as capacity.
///
/// Requests packed onto the same path are laid out left to right in density
/// order, consecutive requests sharing their boundary SN.
pub fn pack_mkp(
    paths: &[SubstratePath],
    requests: &[VirtualRequest],
    mode: SolveMode,
) -> Result<Vec<PathPlacement>, KnapsackError> {
    let items: Vec<KpItem> = requests
        .iter()
        .enumerate()
        .map(|(id, r)| KpItem { id, size: r.vl_count() as u64, profit: r.revenue() })
        .collect();
    let inst = MkpInstance { capacities: paths.iter().map(|p| p.len() as u64).collect(), items };
    let sol = solve_mkp(&inst, mode)?;
    let mut placements = Vec::new();
    for (k, path) in paths.iter().enumerate() {
        let mut packed: Vec<&KpItem> = sol.packed_into(k).into_iter().map(|j| &inst.items[j]).collect();
        packed.sort_by(|a, b| crate::knapsack::by_density(a, b));
        let mut offset = 0;
        for it in packed {
            let req = &requests[it.id];
            let span = req.vl_count();
            let embedding = Embedding {
                request: req.id(),
                node_map: path.nodes[offset..offset + req.vn_count()].to_vec(),
                link_map: path.edges[offset..offset + span].iter().map(|&e| vec![e]).collect(),
            };
            placements.push(PathPlacement { request: it.id, path: k, offset, embedding });
            offset += span;
        }
    }
    Ok(placements)
}

/// Chooses which placements to fund: a multi-dimensional knapsack with one
/// dimension per SN (CPU) and per SL (bandwidth) and the current residuals
/// as capacities. Returns indices into `placements`, ascending.
pub fn assign_mdkp(
    net: &SubstrateNetwork,
    placements: &[PathPlacement],
    requests: &[VirtualRequest],
    mode: SolveMode,
) -> Result<Vec<usize>, KnapsackError> {
    let nv = net.node_count();
    let mut capacities = net.residual_cpus().to_vec();
    capacities.extend_from_slice(net.residual_bws());
    let items = placements
        .iter()
        .enumerate()
        .map(|(id, p)| {
            let req = &requests[p.request];
            let mut sizes = vec![0u64; nv + net.edge_count()];
            for (vn, &sn) in p.embedding.node_map.iter().enumerate() {
                sizes[sn] += req.cpu(vn);
            }
            for (vl, sls) in p.embedding.link_map.iter().enumerate() {
                for &sl in sls {
                    sizes[nv + sl] += req.bw(vl);
                }
            }
            MdkpItem { id, profit: req.revenue(), sizes }
        })
        .collect();
    Ok(solve_mdkp(&MdkpInstance { capacities, items }, mode)?.selected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PeConfig {
    pub mkp: SolveMode,
    pub mdkp: SolveMode,
}

/// What one round of [`procedure_pe`] did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeIteration {
    pub round: usize,
    /// SL counts of the extracted substrate paths.
    pub path_lengths: Vec<usize>,
    /// Ids of requests the MKP step placed.
    pub packed: Vec<usize>,
    /// Ids of requests the MDKP step funded and committed.
    pub funded: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct PeOutcome {
    pub batch: EmbeddingBatch,
    pub iterations: Vec<PeIteration>,
}

impl PeOutcome {
    pub fn revenue(&self) -> u64 {
        self.batch.revenue()
    }
}

/// Embeds path requests round by round until a round funds nothing.
/// Accepted requests are committed on `net`.
pub fn procedure_pe(
    net: &mut SubstrateNetwork,
    requests: &[VirtualRequest],
    cfg: PeConfig,
) -> Result<PeOutcome, PathError> {
    if let Some(r) = requests.iter().find(|r| r.shape() != Shape::Path) {
        return Err(PathError::NotAPath(r.id()));
    }
    let mut batch = EmbeddingBatch::new(net);
    let mut iterations = Vec::new();
    let mut pending: Vec<VirtualRequest> = requests.to_vec();
    loop {
        if pending.is_empty() {
            break;
        }
        let paths = decompose_paths(net);
        let placements = pack_mkp(&paths, &pending, cfg.mkp)?;
        let chosen = assign_mdkp(net, &placements, &pending, cfg.mdkp)?;
        let mut funded = Vec::new();
        let mut taken = vec![false; pending.len()];
        for &i in &chosen {
            let p = &placements[i];
            batch.commit(net, &pending[p.request], p.embedding.clone())?;
            funded.push(pending[p.request].id());
            taken[p.request] = true;
        }
        iterations.push(PeIteration {
            round: iterations.len(),
            path_lengths: paths.iter().map(SubstratePath::len).collect(),
            packed: placements.iter().map(|p| pending[p.request].id()).collect(),
            funded,
        });
        if chosen.is_empty() {
            break;
        }
        let mut k = 0;
        pending.retain(|_| {
            k += 1;
            !taken[k - 1]
        });
    }
    Ok(PeOutcome { batch, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::solve_kp_dp;
    use crate::model::validate_embedding;

    fn line(m: usize, cpu: u64, bw: u64) -> SubstrateNetwork {
        SubstrateNetwork::new(vec![cpu; m], (1..m).map(|i| (i - 1, i, bw))).unwrap()
    }

    fn unit_path(id: usize, vns: usize) -> VirtualRequest {
        VirtualRequest::path(id, vec![1; vns], vec![1; vns - 1], 1).unwrap()
    }

    #[test]
    fn path_substrate_is_its_own_decomposition() {
        let net = line(6, 1, 1);
        let paths = decompose_paths(&net);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].nodes(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(paths[0].edges(), &[0, 1, 2, 3, 4]);
    }

    #[test]
    fn triangle_and_star() {
        let tri = SubstrateNetwork::new(vec![1; 3], [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        let lens: Vec<_> = decompose_paths(&tri).iter().map(SubstratePath::len).collect();
        assert_eq!(lens, vec![2, 1]);
        let star = SubstrateNetwork::new(vec![1; 4], [(0, 1, 1), (0, 2, 1), (0, 3, 1)]).unwrap();
        let lens: Vec<_> = decompose_paths(&star).iter().map(SubstratePath::len).collect();
        assert_eq!(lens, vec![2, 1]);
    }

    #[test]
    fn exhausted_links_are_skipped() {
        let mut net = line(4, 2, 1);
        let req = VirtualRequest::path(0, vec![2, 1], vec![1], 1).unwrap();
        net.commit(&req, &Embedding { request: 0, node_map: vec![1, 2], link_map: vec![vec![1]] })
            .unwrap();
        // SN 1 has no CPU left, so SLs 0 and 1 are unusable
        let paths = decompose_paths(&net);
        assert_eq!(paths.len(), 1);
        assert_eq!(paths[0].edges(), &[2]);
    }

    #[test]
    fn single_request_placed_at_offset_zero() {
        let net = line(11, 5, 5);
        let paths = decompose_paths(&net);
        let placed = pack_mkp(&paths, &[unit_path(0, 6)], SolveMode::Exact).unwrap();
        assert_eq!(placed.len(), 1);
        assert_eq!(placed[0].offset, 0);
        assert_eq!(placed[0].embedding.node_map, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn oversubscribed_path_places_one() {
        let net = line(11, 5, 5);
        let paths = decompose_paths(&net);
        let reqs = [unit_path(0, 6), unit_path(1, 7)];
        let placed = pack_mkp(&paths, &reqs, SolveMode::Exact).unwrap();
        assert_eq!(placed.len(), 1);
    }

    #[test]
    fn consecutive_placements_share_boundary() {
        let net = line(9, 5, 5);
        let paths = decompose_paths(&net);
        let reqs = [unit_path(0, 4), unit_path(1, 5)];
        let placed = pack_mkp(&paths, &reqs, SolveMode::Greedy).unwrap();
        assert_eq!(placed.len(), 2);
        assert_eq!(placed[0].embedding.node_map.last(), placed[1].embedding.node_map.first());
        for p in &placed {
            assert!(validate_embedding(&net, &reqs[p.request], &p.embedding).unwrap().is_feasible());
        }
    }

    #[test]
    fn shared_boundary_cpu_forces_exclusion() {
        // SN 3 is shared; it holds 2 CPU but each request puts 2 on it
        let mut net = line(8, 2, 5);
        let a = VirtualRequest::path(0, vec![1, 1, 1, 2], vec![1, 1, 1], 1).unwrap();
        let b = VirtualRequest::path(1, vec![2, 1, 1, 1], vec![1, 1, 1], 1).unwrap();
        let reqs = [a, b];
        let paths = decompose_paths(&net);
        let placed = pack_mkp(&paths, &reqs, SolveMode::Exact).unwrap();
        assert_eq!(placed.len(), 2);
        for mode in [SolveMode::Greedy, SolveMode::Exact] {
            assert_eq!(assign_mdkp(&net, &placed, &reqs, mode).unwrap().len(), 1);
        }
        let out = procedure_pe(&mut net, &reqs, PeConfig::default()).unwrap();
        assert_eq!(out.batch.len(), 2, "second round re-places the leftover");
    }

    #[test]
    fn rejects_cycle_requests() {
        let mut net = line(4, 5, 5);
        let c = VirtualRequest::cycle(3, vec![1; 3], vec![1; 3], 1).unwrap();
        assert!(matches!(procedure_pe(&mut net, &[c], PeConfig::default()), Err(PathError::NotAPath(3))));
    }

    #[test]
    fn no_requests() {
        let mut net = line(4, 5, 5);
        let out = procedure_pe(&mut net, &[], PeConfig::default()).unwrap();
        assert!(out.batch.is_empty());
        assert_eq!(out.revenue(), 0);
    }

    #[test]
    fn uniform_path_matches_kp() {
        // 9 SLs; requests of 2..=5 VNs with revenue 3,4,5,7 -> sizes 1..=4
        let mut net = line(10, 2, 1);
        let reqs: Vec<_> = [(2, 3), (3, 4), (4, 5), (5, 7)]
            .iter()
            .enumerate()
            .map(|(id, &(n, w))| VirtualRequest::path(id, vec![1; n], vec![1; n - 1], w).unwrap())
            .collect();
        let items: Vec<_> = reqs
            .iter()
            .map(|r| KpItem { id: r.id(), size: r.vl_count() as u64, profit: r.revenue() })
            .collect();
        let cfg = PeConfig { mkp: SolveMode::Exact, mdkp: SolveMode::Exact };
        let out = procedure_pe(&mut net, &reqs, cfg).unwrap();
        assert_eq!(out.revenue(), solve_kp_dp(9, &items).profit);
        assert!(out.batch.residuals_conserved(&net));
    }
}
