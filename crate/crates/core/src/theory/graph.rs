use crate::model::{ModelError, SubstrateNetwork};

use super::TheoryError;

/// A small undirected simple graph without resource data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    /// Normalised `(u, v)` with `u < v`, in insertion order.
    edges: Vec<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, TheoryError> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(TheoryError::Shape(format!("bad edge ({u}, {v}) on {n} vertices")));
            }
            let e = (u.min(v), u.max(v));
            if out.contains(&e) {
                return Err(TheoryError::Shape(format!("repeated edge ({u}, {v})")));
            }
            out.push(e);
        }
        Ok(Self { n, edges: out })
    }

    pub fn path(n: usize) -> Self {
        Self { n, edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs three vertices");
        let mut g = Self::path(n);
        g.edges.push((0, n - 1));
        g
    }

    pub fn complete(n: usize) -> Self {
        Self { n, edges: (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect() }
    }

    /// `K_{1,leaves}` with the hub at vertex 0.
    pub fn star(leaves: usize) -> Self {
        Self { n: leaves + 1, edges: (1..=leaves).map(|v| (0, v)).collect() }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Per vertex, `(neighbor, edge index)` pairs in ascending neighbor order.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, i));
            adj[v].push((u, i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// This graph plus one fresh vertex (id `n`) joined to `neighbors`.
    pub fn with_vertex(&self, neighbors: &[usize]) -> Self {
        let mut g = self.clone();
        g.n += 1;
        for &v in neighbors {
            assert!(v < self.n, "neighbor {v} out of range");
            g.edges.push((v, self.n));
        }
        g
    }

    /// Substrate with uniform CPU and bandwidth; edge order is kept.
    pub fn to_network(&self, cpu: u64, bw: u64) -> Result<SubstrateNetwork, ModelError> {
        SubstrateNetwork::new(vec![cpu; self.n], self.edges.iter().map(|&(u, v)| (u, v, bw)))
    }

    /// Edge set as a bitmask over vertex pairs in lexicographic order.
    pub fn pair_mask(&self) -> u64 {
        let idx = pair_index(self.n);
        self.edges.iter().fold(0, |m, &(u, v)| m | 1 << idx[u][v])
    }

    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut edges = Vec::new();
        let mut bit = 0;
        for u in 0..n {
            for v in u + 1..n {
                if mask >> bit & 1 == 1 {
                    edges.push((u, v));
                }
                bit += 1;
            }
        }
        Self { n, edges }
    }
}

fn pair_index(n: usize) -> Vec<Vec<usize>> {
    let mut idx = vec![vec![usize::MAX; n]; n];
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            idx[u][v] = bit;
            idx[v][u] = bit;
            bit += 1;
        }
    }
    idx
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// One representative of every isomorphism class of connected graphs on
/// exactly `n` vertices (`1 <= n <= 6`).
pub fn connected_graphs_up_to_iso(n: usize) -> Result<Vec<SimpleGraph>, TheoryError> {
    super::cap("graph enumeration vertices", n, 6)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let pairs = n * (n - 1) / 2;
    let idx = pair_index(n);
    let pair_list: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    // permuted bit position of each pair under each vertex permutation
    let maps: Vec<Vec<usize>> = permutations(n)
        .into_iter()
        .map(|p| pair_list.iter().map(|&(u, v)| idx[p[u]][p[v]]).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs {
        if (mask.count_ones() as usize) < n - 1 {
            continue;
        }
        let canonical = maps.iter().all(|map| {
            let mut img = 0u64;
            for (b, &to) in map.iter().enumerate() {
                img |= (mask >> b & 1) << to;
            }
            img >= mask
        });
        if canonical {
            let g = SimpleGraph::from_pair_mask(n, mask);
            if g.is_connected() {
                out.push(g);
            }
        }
    }
    Ok(out)
}
