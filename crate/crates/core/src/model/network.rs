use std::collections::VecDeque;

use super::{EdgeId, ModelError, NodeId};

/// Undirected, connected, simple substrate graph with CPU on nodes and
/// bandwidth on links.
///
/// Capacities are fixed at construction. Residuals start equal to the
/// capacities and only move through [`SubstrateNetwork::commit`] and
/// [`SubstrateNetwork::release`], so `0 <= residual <= capacity` always holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstrateNetwork {
    cpu: Vec<u64>,
    bw: Vec<u64>,
    edges: Vec<(NodeId, NodeId)>,
    pub(crate) residual_cpu: Vec<u64>,
    pub(crate) residual_bw: Vec<u64>,
    /// Per node, `(neighbor, edge)` sorted by neighbor id.
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
}

impl SubstrateNetwork {
    /// Builds a network from per-node CPU and `(u, v, bw)` links.
    ///
    /// Edge ids follow the order of `links`; endpoints are stored with the
    /// smaller id first.
    pub fn new(
        cpu: Vec<u64>,
        links: impl IntoIterator<Item = (NodeId, NodeId, u64)>,
    ) -> Result<Self, ModelError> {
        let n = cpu.len();
        if n == 0 {
            return Err(ModelError::EmptySubstrate);
        }
        let mut edges = Vec::new();
        let mut bw = Vec::new();
        let mut adjacency = vec![Vec::new(); n];
        for (u, v, cap) in links {
            if u >= n || v >= n {
                return Err(ModelError::UnknownNode(u.max(v)));
            }
            if u == v {
                return Err(ModelError::SelfLoop(u));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if adjacency[a].iter().any(|&(w, _)| w == b) {
                return Err(ModelError::ParallelEdge(a, b));
            }
            let id = edges.len();
            edges.push((a, b));
            bw.push(cap);
            adjacency[a].push((b, id));
            adjacency[b].push((a, id));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let net = Self {
            residual_cpu: cpu.clone(),
            residual_bw: bw.clone(),
            cpu,
            bw,
            edges,
            adjacency,
        };
        if !net.is_connected() {
            return Err(ModelError::Disconnected);
        }
        Ok(net)
    }

    pub fn node_count(&self) -> usize {
        self.cpu.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cpu(&self, v: NodeId) -> u64 {
        self.cpu[v]
    }

    pub fn bw(&self, e: EdgeId) -> u64 {
        self.bw[e]
    }

    pub fn cpu_capacities(&self) -> &[u64] {
        &self.cpu
    }

    pub fn bw_capacities(&self) -> &[u64] {
        &self.bw
    }

    pub fn residual_cpu(&self, v: NodeId) -> u64 {
        self.residual_cpu[v]
    }

    pub fn residual_bw(&self, e: EdgeId) -> u64 {
        self.residual_bw[e]
    }

    pub fn residual_cpus(&self) -> &[u64] {
        &self.residual_cpu
    }

    pub fn residual_bws(&self) -> &[u64] {
        &self.residual_bw
    }

    /// Endpoints of `e`, smaller id first.
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        self.edges[e]
    }

    pub fn edges(&self) -> &[(NodeId, NodeId)] {
        &self.edges
    }

    /// `(neighbor, edge)` pairs of `v`, ascending by neighbor id.
    pub fn neighbors(&self, v: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.adjacency[v].len()
    }

    pub fn edge_between(&self, u: NodeId, v: NodeId) -> Option<EdgeId> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    /// The endpoint of `e` that is not `v`, if `v` lies on `e`.
    pub fn opposite(&self, e: EdgeId, v: NodeId) -> Option<NodeId> {
        let (a, b) = self.edges[e];
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// A copy whose capacities are this network's current residuals.
    ///
    /// Validating against the snapshot checks an embedding against what is
    /// still free rather than against the original capacities.
    pub fn residual_snapshot(&self) -> Self {
        Self {
            cpu: self.residual_cpu.clone(),
            bw: self.residual_bw.clone(),
            edges: self.edges.clone(),
            residual_cpu: self.residual_cpu.clone(),
            residual_bw: self.residual_bw.clone(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Drops every commitment, restoring residuals to capacity.
    pub fn reset_residuals(&mut self) {
        self.residual_cpu.clone_from(&self.cpu);
        self.residual_bw.clone_from(&self.bw);
    }

    fn is_connected(&self) -> bool {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(
            SubstrateNetwork::new(vec![1, 1], [(0, 0, 1)]),
            Err(ModelError::SelfLoop(0))
        );
        assert_eq!(
            SubstrateNetwork::new(vec![1, 1], [(0, 1, 1), (1, 0, 2)]),
            Err(ModelError::ParallelEdge(0, 1))
        );
        assert_eq!(
            SubstrateNetwork::new(vec![1, 1, 1], [(0, 1, 1)]),
            Err(ModelError::Disconnected)
        );
        assert_eq!(
            SubstrateNetwork::new(vec![1], [(0, 3, 1)]),
            Err(ModelError::UnknownNode(3))
        );
        assert_eq!(
            SubstrateNetwork::new(vec![], []),
            Err(ModelError::EmptySubstrate)
        );
    }

    #[test]
    fn adjacency_lookup() {
        let net = SubstrateNetwork::new(vec![3, 3, 3], [(2, 0, 5), (0, 1, 7)]).unwrap();
        assert_eq!(net.endpoints(0), (0, 2));
        assert_eq!(net.edge_between(1, 0), Some(1));
        assert_eq!(net.edge_between(1, 2), None);
        assert_eq!(net.neighbors(0), &[(1, 1), (2, 0)]);
        assert_eq!(net.opposite(0, 2), Some(0));
        assert_eq!(net.opposite(0, 1), None);
    }

    #[test]
    fn single_node_is_connected() {
        let net = SubstrateNetwork::new(vec![4], []).unwrap();
        assert_eq!(net.node_count(), 1);
        assert_eq!(net.edge_count(), 0);
    }
}
