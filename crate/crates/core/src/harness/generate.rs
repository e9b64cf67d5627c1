use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::model::{Shape, SubstrateNetwork, VirtualRequest};

use super::HarnessError;

/// Substrate topology family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Topology {
    /// Uniform random connected graph: a random spanning tree plus uniformly
    /// chosen extra SLs.
    Random { nodes: usize, edges: usize },
    Complete { nodes: usize },
    /// Ring `0-1-...-(nodes-1)-0`.
    Cycle { nodes: usize },
    /// Line `0-1-...-(nodes-1)`.
    Path { nodes: usize },
}

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub min: u64,
    pub max: u64,
}

impl Range {
    pub const fn new(min: u64, max: u64) -> Self {
        Self { min, max }
    }

    pub const fn fixed(v: u64) -> Self {
        Self { min: v, max: v }
    }

    fn check(&self, what: &str) -> Result<(), HarnessError> {
        if self.min > self.max {
            return Err(HarnessError::Config(format!("{what} range [{}, {}] is empty", self.min, self.max)));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> u64 {
        rng.gen_range(self.min..=self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstrateSpec {
    pub topology: Topology,
    pub cpu: Range,
    pub bw: Range,
}

impl SubstrateSpec {
    /// Capacities fixed at 100 units.
    pub fn new(topology: Topology) -> Self {
        Self { topology, cpu: Range::fixed(100), bw: Range::fixed(100) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RevenueRule {
    /// Every request is worth 1.
    Unit,
    /// A request is worth its VN count.
    VnCount,
}

impl std::str::FromStr for RevenueRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "unit" => Ok(RevenueRule::Unit),
            "vn-count" => Ok(RevenueRule::VnCount),
            other => Err(format!("unknown revenue rule `{other}` (unit|vn-count)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestSpec {
    pub shape: Shape,
    pub count: usize,
    /// VN count per request.
    pub vns: Range,
    /// CPU demand per VN and bandwidth demand per VL.
    pub demand: Range,
    pub revenue: RevenueRule,
}

impl RequestSpec {
    /// 5 to 10 VNs, demands 1 to 5, unit revenue.
    pub fn new(shape: Shape, count: usize) -> Self {
        Self { shape, count, vns: Range::new(5, 10), demand: Range::new(1, 5), revenue: RevenueRule::Unit }
    }

    pub(crate) fn check(&self) -> Result<(), HarnessError> {
        self.vns.check("VN count")?;
        self.demand.check("demand")?;
        if self.demand.min == 0 {
            return Err(HarnessError::Config("demands must be at least 1".into()));
        }
        match self.shape {
            Shape::Path if self.vns.min == 0 => Err(HarnessError::Config("path requests need a VN".into())),
            Shape::Cycle if self.vns.min < 3 => {
                Err(HarnessError::Config("cycle requests need at least 3 VNs".into()))
            }
            Shape::General => Err(HarnessError::Config("only path and cycle requests are generated".into())),
            _ => Ok(()),
        }
    }
}

/// Random connected substrate; the same spec and seed give the same network.
pub fn gen_substrate(spec: &SubstrateSpec, seed: u64) -> Result<SubstrateNetwork, HarnessError> {
    spec.cpu.check("CPU")?;
    spec.bw.check("bandwidth")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (n, links) = match spec.topology {
        Topology::Random { nodes, edges } => (nodes, random_links(nodes, edges, &mut rng)?),
        Topology::Complete { nodes } => {
            (nodes, (0..nodes).flat_map(|u| (u + 1..nodes).map(move |v| (u, v))).collect())
        }
        Topology::Cycle { nodes } => {
            if nodes < 3 {
                return Err(HarnessError::Config(format!("a cycle needs 3 SNs, got {nodes}")));
            }
            (nodes, (0..nodes).map(|i| (i, (i + 1) % nodes)).collect())
        }
        Topology::Path { nodes } => (nodes, (1..nodes).map(|i| (i - 1, i)).collect()),
    };
    if n == 0 {
        return Err(HarnessError::Config("substrate needs at least one SN".into()));
    }
    let cpu: Vec<u64> = (0..n).map(|_| spec.cpu.sample(&mut rng)).collect();
    let links: Vec<_> = links.into_iter().map(|(u, v)| (u, v, spec.bw.sample(&mut rng))).collect();
    Ok(SubstrateNetwork::new(cpu, links)?)
}

fn random_links(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>, HarnessError> {
    let max = n * n.saturating_sub(1) / 2;
    if n == 0 || m + 1 < n || m > max {
        return Err(HarnessError::Config(format!(
            "cannot build a connected simple graph with {n} SNs and {m} SLs"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = vec![false; max];
    let pair = |u: usize, v: usize| {
        let (a, b) = (u.min(v), u.max(v));
        a * n - a * (a + 1) / 2 + (b - a - 1)
    };
    let mut links = Vec::with_capacity(m);
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        let child = order[i];
        present[pair(parent, child)] = true;
        links.push((parent.min(child), parent.max(child)));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !present[pair(u, v)])
        .collect();
    rest.shuffle(rng);
    links.extend(rest.into_iter().take(m - (n - 1)));
    links.sort_unstable();
    Ok(links)
}

/// Random path or cycle requests with ids `0..count`.
pub fn gen_requests(spec: &RequestSpec, seed: u64) -> Result<Vec<VirtualRequest>, HarnessError> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..spec.count)
        .map(|id| {
            let n = spec.vns.sample(&mut rng) as usize;
            let cpu: Vec<u64> = (0..n).map(|_| spec.demand.sample(&mut rng)).collect();
            let links = if spec.shape == Shape::Cycle { n } else { n - 1 };
            let bw: Vec<u64> = (0..links).map(|_| spec.demand.sample(&mut rng)).collect();
            let revenue = match spec.revenue {
                RevenueRule::Unit => 1,
                RevenueRule::VnCount => n as u64,
            };
            let req = match spec.shape {
                Shape::Cycle => VirtualRequest::cycle(id, cpu, bw, revenue)?,
                _ => VirtualRequest::path(id, cpu, bw, revenue)?,
            };
            Ok(req)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph() {
        let net = gen_substrate(&SubstrateSpec::new(Topology::Complete { nodes: 4 }), 1).unwrap();
        assert_eq!(net.edge_count(), 6);
        assert!(net.cpu_capacities().iter().all(|&c| c == 100));
        assert!(net.bw_capacities().iter().all(|&c| c == 100));
    }

    #[test]
    fn random_graph_sizes_and_determinism() {
        let spec = SubstrateSpec::new(Topology::Random { nodes: 30, edges: 150 });
        let a = gen_substrate(&spec, 9).unwrap();
        assert_eq!((a.node_count(), a.edge_count()), (30, 150));
        assert_eq!(a, gen_substrate(&spec, 9).unwrap());
        assert_ne!(a, gen_substrate(&spec, 10).unwrap());
    }

    #[test]
    fn impossible_sizes_are_refused() {
        for (nodes, edges) in [(5, 3), (4, 7), (0, 0)] {
            let spec = SubstrateSpec::new(Topology::Random { nodes, edges });
            assert!(matches!(gen_substrate(&spec, 0), Err(HarnessError::Config(_))));
        }
    }

    #[test]
    fn request_rules() {
        let mut spec = RequestSpec::new(Shape::Path, 50);
        let reqs = gen_requests(&spec, 3).unwrap();
        assert!(reqs.iter().all(|r| r.revenue() == 1 && (5..=10).contains(&r.vn_count())));
        spec.revenue = RevenueRule::VnCount;
        spec.shape = Shape::Cycle;
        let reqs = gen_requests(&spec, 3).unwrap();
        assert!(reqs.iter().all(|r| r.revenue() == r.vn_count() as u64 && r.shape() == Shape::Cycle));
        spec.vns = Range::new(2, 4);
        assert!(gen_requests(&spec, 3).is_err());
    }
}
