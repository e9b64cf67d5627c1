use serde::{Deserialize, Serialize};

use super::{EdgeId, ModelError, NodeId, SubstrateNetwork};

/// Traversal direction around a substrate cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    /// `"+"`: increasing ring position.
    #[serde(rename = "+")]
    Clockwise,
    /// `"-"`: decreasing ring position.
    #[serde(rename = "-")]
    Anticlockwise,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Clockwise, Direction::Anticlockwise];

    pub fn symbol(self) -> &'static str {
        match self {
            Direction::Clockwise => "+",
            Direction::Anticlockwise => "-",
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Cyclic order of a substrate that is a single cycle.
///
/// Position 0 holds SN 0 and position 1 its smaller-id neighbor, so on a
/// ring built as `0-1-2-...-(m-1)-0` the clockwise order is `0, 1, ..., m-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ring {
    order: Vec<NodeId>,
    position: Vec<usize>,
    /// `forward[p]` joins `order[p]` and `order[(p + 1) % m]`.
    forward: Vec<EdgeId>,
}

impl Ring {
    pub fn of(net: &SubstrateNetwork) -> Result<Self, ModelError> {
        let m = net.node_count();
        if m < 3 || net.edge_count() != m || (0..m).any(|v| net.degree(v) != 2) {
            return Err(ModelError::NotACycle);
        }
        let mut order = Vec::with_capacity(m);
        let mut forward = Vec::with_capacity(m);
        let (mut prev, mut cur) = (usize::MAX, 0);
        // connectivity plus all-degree-2 means this walk closes after m steps
        for _ in 0..m {
            order.push(cur);
            let &(next, e) = net
                .neighbors(cur)
                .iter()
                .find(|&&(w, _)| w != prev)
                .ok_or(ModelError::NotACycle)?;
            forward.push(e);
            prev = cur;
            cur = next;
        }
        let mut position = vec![0; m];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        Ok(Self { order, position, forward })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn position(&self, v: NodeId) -> usize {
        self.position[v]
    }

    /// The `k`-th SN of `Seq(start, dir)`; `k` is taken modulo `m`.
    pub fn seq_node(&self, start: NodeId, dir: Direction, k: usize) -> NodeId {
        let m = self.len();
        let p = self.position[start];
        let q = match dir {
            Direction::Clockwise => (p + k) % m,
            Direction::Anticlockwise => (p + m - k % m) % m,
        };
        self.order[q]
    }

    /// Index of `v` within `Seq(start, dir)`.
    pub fn seq_index(&self, start: NodeId, dir: Direction, v: NodeId) -> usize {
        let m = self.len();
        let (p, q) = (self.position[start], self.position[v]);
        match dir {
            Direction::Clockwise => (q + m - p) % m,
            Direction::Anticlockwise => (p + m - q) % m,
        }
    }

    /// SL joining the `k`-th and `(k+1)`-th SN of `Seq(start, dir)`.
    pub fn seq_edge(&self, start: NodeId, dir: Direction, k: usize) -> EdgeId {
        let m = self.len();
        let p = self.position[start];
        match dir {
            Direction::Clockwise => self.forward[(p + k) % m],
            Direction::Anticlockwise => self.forward[(p + m - (k % m) + m - 1) % m],
        }
    }

    /// `Seq(start, dir)` as a list of SNs.
    pub fn seq(&self, start: NodeId, dir: Direction) -> Vec<NodeId> {
        (0..self.len()).map(|k| self.seq_node(start, dir, k)).collect()
    }
}
