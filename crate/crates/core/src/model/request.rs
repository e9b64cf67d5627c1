use serde::{Deserialize, Serialize};

use super::ModelError;

/// Topology class of a virtual request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Path,
    Cycle,
    General,
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Shape::Path => "path",
            Shape::Cycle => "cycle",
            Shape::General => "general",
        })
    }
}

/// A virtual network request: VNs with CPU demands, VLs with bandwidth
/// demands, and a revenue.
///
/// Path requests list their links as `(0,1), (1,2), ...`; cycle requests add
/// the closing link `(n-1, 0)` at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VirtualRequest {
    id: usize,
    shape: Shape,
    cpu: Vec<u64>,
    links: Vec<(usize, usize)>,
    bw: Vec<u64>,
    revenue: u64,
}

impl VirtualRequest {
    /// A path request. `bw` must hold one entry fewer than `cpu` (or both
    /// are empty).
    pub fn path(id: usize, cpu: Vec<u64>, bw: Vec<u64>, revenue: u64) -> Result<Self, ModelError> {
        let n = cpu.len();
        if bw.len() != n.saturating_sub(1) {
            return Err(ModelError::malformed(
                id,
                format!("path with {n} VNs needs {} VLs, got {}", n.saturating_sub(1), bw.len()),
            ));
        }
        let links = (1..n).map(|i| (i - 1, i)).collect();
        Self::checked(id, Shape::Path, cpu, links, bw, revenue)
    }

    /// A cycle request with `n >= 3` VNs; `bw[j]` is the demand of the link
    /// from VN `j` to VN `(j+1) % n`.
    pub fn cycle(id: usize, cpu: Vec<u64>, bw: Vec<u64>, revenue: u64) -> Result<Self, ModelError> {
        let n = cpu.len();
        if n < 3 {
            return Err(ModelError::malformed(id, format!("cycle needs at least 3 VNs, got {n}")));
        }
        if bw.len() != n {
            return Err(ModelError::malformed(
                id,
                format!("cycle with {n} VNs needs {n} VLs, got {}", bw.len()),
            ));
        }
        let links = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::checked(id, Shape::Cycle, cpu, links, bw, revenue)
    }

    /// A request with arbitrary topology.
    pub fn general(
        id: usize,
        cpu: Vec<u64>,
        links: Vec<(usize, usize, u64)>,
        revenue: u64,
    ) -> Result<Self, ModelError> {
        let (links, bw) = links.into_iter().map(|(u, v, b)| ((u, v), b)).unzip();
        Self::checked(id, Shape::General, cpu, links, bw, revenue)
    }

    /// Builds a request of the given shape from explicit links, checking that
    /// the links match the shape's canonical layout.
    pub fn with_shape(
        id: usize,
        shape: Shape,
        cpu: Vec<u64>,
        links: Vec<(usize, usize, u64)>,
        revenue: u64,
    ) -> Result<Self, ModelError> {
        match shape {
            Shape::General => Self::general(id, cpu, links, revenue),
            Shape::Path | Shape::Cycle => {
                let bw = links.iter().map(|l| l.2).collect();
                let req = if shape == Shape::Path {
                    Self::path(id, cpu, bw, revenue)?
                } else {
                    Self::cycle(id, cpu, bw, revenue)?
                };
                for (k, &(u, v, _)) in links.iter().enumerate() {
                    let expected = req.links[k];
                    if (u, v) != expected {
                        return Err(ModelError::malformed(
                            id,
                            format!("{shape} VL {k} must be {expected:?}, got {:?}", (u, v)),
                        ));
                    }
                }
                Ok(req)
            }
        }
    }

    fn checked(
        id: usize,
        shape: Shape,
        cpu: Vec<u64>,
        links: Vec<(usize, usize)>,
        bw: Vec<u64>,
        revenue: u64,
    ) -> Result<Self, ModelError> {
        if let Some(j) = cpu.iter().position(|&c| c == 0) {
            return Err(ModelError::malformed(id, format!("VN {j} has zero CPU demand")));
        }
        if let Some(k) = bw.iter().position(|&b| b == 0) {
            return Err(ModelError::malformed(id, format!("VL {k} has zero bandwidth demand")));
        }
        for (k, &(u, v)) in links.iter().enumerate() {
            if u >= cpu.len() || v >= cpu.len() || u == v {
                return Err(ModelError::malformed(id, format!("VL {k} joins invalid VNs {u}, {v}")));
            }
        }
        Ok(Self { id, shape, cpu, links, bw, revenue })
    }

    pub fn id(&self) -> usize {
        self.id
    }

    /// Same request under a different id.
    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn vn_count(&self) -> usize {
        self.cpu.len()
    }

    pub fn vl_count(&self) -> usize {
        self.links.len()
    }

    pub fn cpu(&self, vn: usize) -> u64 {
        self.cpu[vn]
    }

    pub fn cpu_demands(&self) -> &[u64] {
        &self.cpu
    }

    pub fn bw(&self, vl: usize) -> u64 {
        self.bw[vl]
    }

    pub fn bw_demands(&self) -> &[u64] {
        &self.bw
    }

    pub fn link(&self, vl: usize) -> (usize, usize) {
        self.links[vl]
    }

    pub fn links(&self) -> &[(usize, usize)] {
        &self.links
    }

    pub fn revenue(&self) -> u64 {
        self.revenue
    }

    pub fn total_cpu(&self) -> u64 {
        self.cpu.iter().sum()
    }

    pub fn total_bw(&self) -> u64 {
        self.bw.iter().sum()
    }
}
