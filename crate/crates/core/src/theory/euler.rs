use super::{cap, SimpleGraph, TheoryError};

/// Largest cycle-space dimension `|E| - |V| + components` searched.
const CYCLE_SPACE_CAP: usize = 24;

/// True iff `g` has a spanning connected subgraph with every degree even.
///
/// Walks the whole cycle space (every even-degree edge set) in Gray-code
/// order, one fundamental cycle toggled per step.
pub fn is_supereulerian(g: &SimpleGraph) -> Result<bool, TheoryError> {
    let n = g.node_count();
    if n <= 1 {
        return Ok(true);
    }
    if !g.is_connected() {
        return Ok(false);
    }
    let basis = fundamental_cycles(g);
    cap("cycle space dimension", basis.len(), CYCLE_SPACE_CAP)?;
    let mut current: u128 = 0;
    for step in 1u64..1 << basis.len() {
        current ^= basis[step.trailing_zeros() as usize];
        if spans_connected(g, current) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// One edge mask per non-tree edge of a BFS spanning tree: that edge plus
/// the tree path between its ends.
fn fundamental_cycles(g: &SimpleGraph) -> Vec<u128> {
    let n = g.node_count();
    let adj = g.adjacency();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    depth[0] = 0;
    let mut queue = std::collections::VecDeque::from([0]);
    let mut tree = vec![false; g.edge_count()];
    while let Some(v) = queue.pop_front() {
        for &(w, e) in &adj[v] {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = Some((v, e));
                tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    let mut basis = Vec::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if tree[e] {
            continue;
        }
        let mut mask: u128 = 1 << e;
        let (mut a, mut b) = (u, v);
        while a != b {
            if depth[a] < depth[b] {
                std::mem::swap(&mut a, &mut b);
            }
            let (p, pe) = parent[a].expect("non-root has a parent");
            mask ^= 1 << pe;
            a = p;
        }
        basis.push(mask);
    }
    basis
}

fn spans_connected(g: &SimpleGraph, mask: u128) -> bool {
    let n = g.node_count();
    let mut touched = vec![false; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        if mask >> e & 1 == 1 {
            touched[u] = true;
            touched[v] = true;
        }
    }
    if !touched.iter().all(|&t| t) {
        return false;
    }
    let sub = SimpleGraph::new(
        n,
        g.edges().iter().enumerate().filter(|(e, _)| mask >> e & 1 == 1).map(|(_, &p)| p),
    )
    .expect("subgraph of a simple graph");
    sub.is_connected()
}

/// For every unordered vertex pair `{v, u}`, `g` plus a fresh vertex joined
/// to `v` and `u`. `g` has a spanning trail iff one of these graphs is
/// supereulerian (for `g` with at least two vertices).
pub fn sset_to_sg_instances(g: &SimpleGraph) -> Vec<SimpleGraph> {
    let n = g.node_count();
    (0..n).flat_map(|v| (v + 1..n).map(move |u| g.with_vertex(&[v, u]))).collect()
}

/// `g` plus two fresh pendant vertices on `v`. `g` is supereulerian iff the
/// result has a spanning trail.
pub fn sg_to_sset_instance(g: &SimpleGraph, v: usize) -> SimpleGraph {
    g.with_vertex(&[v]).with_vertex(&[v])
}
