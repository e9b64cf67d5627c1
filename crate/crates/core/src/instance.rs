//! JSON instance format.
//!
//! ```json
//! {
//!   "nodes": [{"id": 0, "cpu": 100}, ...],
//!   "edges": [{"u": 0, "v": 1, "bw": 100}, ...],
//!   "requests": [
//!     {"shape": "path", "vns": [{"id": 0, "cpu": 3}, ...],
//!      "vls": [{"u": 0, "v": 1, "bw": 2}, ...], "revenue": 1}
//!   ]
//! }
//! ```
//!
//! Node ids (and VN ids within a request) must be exactly `0..n` in any
//! order. Edge order fixes edge ids; request order fixes request ids. Path
//! and cycle requests must list their VLs in canonical order: `(0,1),
//! (1,2), ...` plus the closing `(n-1,0)` for cycles.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelError, Shape, SubstrateNetwork, VirtualRequest};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{what} ids must be 0..{count} without gaps or repeats")]
    BadIds { what: String, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: usize,
    pub cpu: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub bw: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestRecord {
    pub shape: Shape,
    pub vns: Vec<NodeRecord>,
    pub vls: Vec<EdgeRecord>,
    pub revenue: u64,
}

/// The on-disk layout, field for field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub requests: Vec<RequestRecord>,
}

/// A substrate together with a request set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub network: SubstrateNetwork,
    pub requests: Vec<VirtualRequest>,
}

fn dense(records: &[NodeRecord], what: &str) -> Result<Vec<u64>, InstanceError> {
    let n = records.len();
    let mut out = vec![None; n];
    for r in records {
        match out.get_mut(r.id) {
            Some(slot @ None) => *slot = Some(r.cpu),
            _ => return Err(InstanceError::BadIds { what: what.to_string(), count: n }),
        }
    }
    Ok(out.into_iter().map(Option::unwrap).collect())
}

impl Instance {
    pub fn new(network: SubstrateNetwork, requests: Vec<VirtualRequest>) -> Self {
        Self { network, requests }
    }

    pub fn from_file_format(file: &InstanceFile) -> Result<Self, InstanceError> {
        let cpu = dense(&file.nodes, "node")?;
        let network = SubstrateNetwork::new(cpu, file.edges.iter().map(|e| (e.u, e.v, e.bw)))?;
        let requests = file
            .requests
            .iter()
            .enumerate()
            .map(|(id, r)| {
                let cpu = dense(&r.vns, &format!("request {id} VN"))?;
                let links = r.vls.iter().map(|l| (l.u, l.v, l.bw)).collect();
                Ok(VirtualRequest::with_shape(id, r.shape, cpu, links, r.revenue)?)
            })
            .collect::<Result<_, InstanceError>>()?;
        Ok(Self { network, requests })
    }

    /// Capacities only; residual state is not part of the format.
    pub fn to_file_format(&self) -> InstanceFile {
        let net = &self.network;
        InstanceFile {
            nodes: (0..net.node_count()).map(|id| NodeRecord { id, cpu: net.cpu(id) }).collect(),
            edges: (0..net.edge_count())
                .map(|e| {
                    let (u, v) = net.endpoints(e);
                    EdgeRecord { u, v, bw: net.bw(e) }
                })
                .collect(),
            requests: self
                .requests
                .iter()
                .map(|r| RequestRecord {
                    shape: r.shape(),
                    vns: (0..r.vn_count()).map(|id| NodeRecord { id, cpu: r.cpu(id) }).collect(),
                    vls: (0..r.vl_count())
                        .map(|k| {
                            let (u, v) = r.link(k);
                            EdgeRecord { u, v, bw: r.bw(k) }
                        })
                        .collect(),
                    revenue: r.revenue(),
                })
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Self::from_file_format(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file_format()).expect("instance serialises")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<(), InstanceError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_layout() {
        let text = r#"{
            "nodes": [{"id": 1, "cpu": 5}, {"id": 0, "cpu": 4}],
            "edges": [{"u": 0, "v": 1, "bw": 9}],
            "requests": [{"shape": "path", "vns": [{"id": 0, "cpu": 1}, {"id": 1, "cpu": 2}],
                          "vls": [{"u": 0, "v": 1, "bw": 3}], "revenue": 2}]
        }"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.network.cpu_capacities(), &[4, 5]);
        assert_eq!(inst.requests[0].bw_demands(), &[3]);
        assert_eq!(inst.requests[0].revenue(), 2);
    }

    #[test]
    fn rejects_gappy_ids() {
        let text = r#"{"nodes": [{"id": 0, "cpu": 5}, {"id": 2, "cpu": 4}], "edges": [{"u": 0, "v": 1, "bw": 1}]}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::BadIds { .. })));
    }

    #[test]
    fn rejects_non_canonical_cycle_links() {
        let text = r#"{"nodes": [{"id": 0, "cpu": 5}], "edges": [],
            "requests": [{"shape": "cycle", "vns": [{"id": 0, "cpu": 1}, {"id": 1, "cpu": 1}, {"id": 2, "cpu": 1}],
                          "vls": [{"u": 0, "v": 1, "bw": 1}, {"u": 1, "v": 2, "bw": 1}, {"u": 0, "v": 2, "bw": 1}],
                          "revenue": 1}]}"#;
        assert!(matches!(Instance::from_json(text), Err(InstanceError::Model(_))));
    }
}
