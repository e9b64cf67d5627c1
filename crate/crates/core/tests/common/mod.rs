//! Independent brute-force oracles and fixtures shared by the integration
//! tests. Nothing here calls the solvers under test.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vne_core::cycle::Wdag;
use vne_core::harness::{run_algorithm, Algorithm};
use vne_core::knapsack::{KpItem, MdkpInstance, MkpInstance};
use vne_core::theory::SimpleGraph;
use vne_core::{Direction, Embedding, EmbeddingBatch, Instance, SubstrateNetwork, VirtualRequest};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    Instance::read(&path).unwrap_or_else(|e| panic!("fixture {}: {e}", path.display()))
}

/// Ring `0-1-...-(m-1)-0` with the given CPUs and per-SL bandwidths.
pub fn ring(cpu: Vec<u64>, bw: Vec<u64>) -> SubstrateNetwork {
    let m = cpu.len();
    SubstrateNetwork::new(cpu, (0..m).map(|i| (i, (i + 1) % m, bw[i]))).unwrap()
}

/// Random ring of 3 to 8 SNs with a cycle request of 3 to `min(5, m)` VNs.
/// Capacities are drawn low enough that a fair share of instances has no
/// simplex embedding.
pub fn random_ring_case(r: &mut ChaCha8Rng) -> (SubstrateNetwork, VirtualRequest) {
    let m = r.gen_range(3..=8);
    let n = r.gen_range(3..=m.min(5));
    let cpu = (0..m).map(|_| r.gen_range(1..=8)).collect();
    let bw = (0..m).map(|_| r.gen_range(1..=8)).collect();
    let dcpu = (0..n).map(|_| r.gen_range(1..=5)).collect();
    let dbw = (0..n).map(|_| r.gen_range(1..=5)).collect();
    (ring(cpu, bw), VirtualRequest::cycle(0, dcpu, dbw, 1).unwrap())
}

/// Cyclic SN order of a ring read off its edge list, with the SL from each
/// SN to the next.
fn ring_walk(net: &SubstrateNetwork) -> (Vec<usize>, Vec<usize>) {
    let m = net.node_count();
    let mut order = vec![0];
    let mut links = Vec::new();
    let mut prev = usize::MAX;
    while links.len() < m {
        let cur = *order.last().unwrap();
        let (e, next) = net
            .edges()
            .iter()
            .enumerate()
            .filter_map(|(e, &(a, b))| if a == cur { Some((e, b)) } else if b == cur { Some((e, a)) } else { None })
            .find(|&(_, w)| w != prev)
            .unwrap();
        links.push(e);
        prev = cur;
        if links.len() < m {
            order.push(next);
        }
    }
    (order, links)
}

/// Cheapest simplex embedding cost found by trying every start, direction
/// and increasing host subsequence, against residuals.
pub fn ring_brute(net: &SubstrateNetwork, req: &VirtualRequest) -> Option<u64> {
    let (order, links) = ring_walk(net);
    let m = order.len();
    let n = req.vn_count();
    let mut best: Option<u64> = None;
    for s in 0..m {
        for reverse in [false, true] {
            // node at step k and the SL walked from step k to k+1
            let node = |k: usize| if reverse { order[(s + m - k) % m] } else { order[(s + k) % m] };
            let link = |k: usize| if reverse { links[(s + m - k - 1) % m] } else { links[(s + k) % m] };
            for mask in 0u32..1 << (m - 1) {
                if mask.count_ones() as usize != n - 1 {
                    continue;
                }
                let mut steps = vec![0];
                steps.extend((1..m).filter(|k| mask >> (k - 1) & 1 == 1));
                let mut ok = true;
                let mut cost = 0;
                for j in 0..n {
                    ok &= net.residual_cpu(node(steps[j])) >= req.cpu(j);
                    let end = if j + 1 == n { m } else { steps[j + 1] };
                    for k in steps[j]..end {
                        ok &= net.residual_bw(link(k)) >= req.bw(j);
                        cost += req.bw(j);
                    }
                }
                if ok && best.is_none_or(|b| cost < b) {
                    best = Some(cost);
                }
            }
        }
    }
    best
}

/// Checks an embedding from first principles against the residuals of
/// `net`: injective hosts with the CPU, each VL mapped to a simple SL walk
/// between its hosts, and bandwidth summed per SL.
pub fn embedding_fits(net: &SubstrateNetwork, req: &VirtualRequest, emb: &Embedding) -> bool {
    let hosts = &emb.node_map;
    if hosts.len() != req.vn_count() || emb.link_map.len() != req.vl_count() {
        return false;
    }
    let distinct: BTreeSet<_> = hosts.iter().collect();
    if distinct.len() != hosts.len() || hosts.iter().any(|&v| v >= net.node_count()) {
        return false;
    }
    let mut cpu = vec![0u64; net.node_count()];
    for (j, &v) in hosts.iter().enumerate() {
        cpu[v] += req.cpu(j);
    }
    let mut bw = vec![0u64; net.edge_count()];
    for (k, path) in emb.link_map.iter().enumerate() {
        let (a, b) = req.link(k);
        let mut at = hosts[a];
        let mut seen = BTreeSet::from([at]);
        for &e in path {
            if e >= net.edge_count() {
                return false;
            }
            let (x, y) = net.edges()[e];
            at = if x == at {
                y
            } else if y == at {
                x
            } else {
                return false;
            };
            if !seen.insert(at) {
                return false;
            }
            bw[e] += req.bw(k);
        }
        if at != hosts[b] {
            return false;
        }
    }
    (0..net.node_count()).all(|v| cpu[v] <= net.residual_cpu(v))
        && (0..net.edge_count()).all(|e| bw[e] <= net.residual_bw(e))
}

/// Replays a batch on a fresh copy of `initial`, checking each member fits
/// the residuals left by the ones before it, and that the residuals the
/// algorithm left on `after` are capacity minus committed demand.
pub fn replay_ok(initial: &SubstrateNetwork, after: &SubstrateNetwork, batch: &EmbeddingBatch) -> bool {
    let mut cpu = initial.residual_cpus().to_vec();
    let mut bw = initial.residual_bws().to_vec();
    for (req, emb) in batch.accepted() {
        let snapshot = SubstrateNetwork::new(
            cpu.clone(),
            initial.edges().iter().zip(&bw).map(|(&(u, v), &b)| (u, v, b)),
        )
        .unwrap();
        if !embedding_fits(&snapshot, req, emb) {
            return false;
        }
        for (j, &v) in emb.node_map.iter().enumerate() {
            cpu[v] -= req.cpu(j);
        }
        for (k, path) in emb.link_map.iter().enumerate() {
            for &e in path {
                bw[e] -= req.bw(k);
            }
        }
    }
    cpu == after.residual_cpus() && bw == after.residual_bws()
}

/// Runs `alg` through the harness entry point and replays its batch.
pub fn run_and_replay(alg: Algorithm, net: &SubstrateNetwork, requests: &[VirtualRequest]) -> bool {
    let batch = run_algorithm(alg, net, requests).unwrap();
    let mut after = net.clone();
    for (req, emb) in batch.accepted() {
        after.commit(req, emb).unwrap();
    }
    replay_ok(net, &after, &batch)
}

pub fn kp_exhaustive(capacity: u64, items: &[KpItem]) -> u64 {
    let n = items.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let (s, p) = (0..n)
                .filter(|i| mask >> i & 1 == 1)
                .fold((0u64, 0u64), |(s, p), i| (s + items[i].size, p + items[i].profit));
            (s <= capacity).then_some(p)
        })
        .max()
        .unwrap_or(0)
}

/// Best profit over every assignment of items to a knapsack or to none.
pub fn mkp_exhaustive(inst: &MkpInstance) -> u64 {
    fn go(inst: &MkpInstance, i: usize, load: &mut Vec<u64>, profit: u64, best: &mut u64) {
        if i == inst.items.len() {
            *best = (*best).max(profit);
            return;
        }
        go(inst, i + 1, load, profit, best);
        for k in 0..load.len() {
            if load[k] + inst.items[i].size <= inst.capacities[k] {
                load[k] += inst.items[i].size;
                go(inst, i + 1, load, profit + inst.items[i].profit, best);
                load[k] -= inst.items[i].size;
            }
        }
    }
    let mut best = 0;
    go(inst, 0, &mut vec![0; inst.capacities.len()], 0, &mut best);
    best
}

/// Best `(profit, cardinality)` objective over every item subset; pass unit
/// profits for the cardinality version.
pub fn mdkp_exhaustive(inst: &MdkpInstance) -> u64 {
    let n = inst.items.len();
    let d = inst.capacities.len();
    (0u32..1 << n)
        .filter_map(|mask| {
            let chosen: Vec<_> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let fits = (0..d).all(|k| chosen.iter().map(|&i| inst.items[i].sizes[k]).sum::<u64>() <= inst.capacities[k]);
            fits.then(|| chosen.iter().map(|&i| inst.items[i].profit).sum())
        })
        .max()
        .unwrap_or(0)
}

fn edge_subsets_with(g: &SimpleGraph, accept: impl Fn(&[usize]) -> bool) -> bool {
    let n = g.node_count();
    let m = g.edge_count();
    (0u32..1 << m).any(|mask| {
        let mut deg = vec![0usize; n];
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            if mask >> e & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                parent[a] = b;
            }
        }
        let root = find(&mut parent, 0);
        deg.iter().all(|&d| d > 0) && (0..n).all(|v| find(&mut parent, v) == root) && accept(&deg)
    })
}

/// A spanning connected edge subset with 0 or 2 odd-degree vertices.
pub fn spanning_trail_by_subsets(g: &SimpleGraph) -> bool {
    g.node_count() == 1 || edge_subsets_with(g, |deg| deg.iter().filter(|&&d| d % 2 == 1).count() <= 2)
}

/// A spanning connected edge subset with every degree even.
pub fn supereulerian_by_subsets(g: &SimpleGraph) -> bool {
    g.node_count() == 1 || edge_subsets_with(g, |deg| deg.iter().all(|&d| d % 2 == 0))
}

/// Every directed cycle of a WDAG through vertex 0, as its vertex sequence
/// (starting at 0) and total arc weight.
pub fn wdag_cycles(w: &Wdag) -> Vec<(Vec<usize>, u64)> {
    fn go(w: &Wdag, at: usize, path: &mut Vec<usize>, weight: u64, out: &mut Vec<(Vec<usize>, u64)>) {
        for a in w.arcs.iter().filter(|a| a.from == at) {
            if a.to == 0 {
                out.push((path.clone(), weight + a.weight));
            } else {
                path.push(a.to);
                go(w, a.to, path, weight + a.weight, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(w, 0, &mut vec![0], 0, &mut out);
    out
}

/// Arcs of the WDAG for `(start, dir)` derived from the ordering and
/// segment-bandwidth criteria alone, as `(layer, from SN, to SN, hops)`;
/// closing arcs have layer `n - 1` and target the start SN. Direction
/// "+" walks ascending ring positions from `start` along `0-1-...-(m-1)-0`.
pub fn expected_arcs(
    net: &SubstrateNetwork,
    req: &VirtualRequest,
    start: usize,
    dir: Direction,
) -> BTreeSet<(usize, usize, usize, usize)> {
    let (order, links) = ring_walk(net);
    let m = order.len();
    let s = order.iter().position(|&v| v == start).unwrap();
    let fwd = dir == Direction::Clockwise;
    let node = |k: usize| if fwd { order[(s + k) % m] } else { order[(s + m - k) % m] };
    let link = |k: usize| if fwd { links[(s + k) % m] } else { links[(s + m - k - 1) % m] };
    let n = req.vn_count();
    let seg_ok = |vl: usize, a: usize, b: usize| (a..b).all(|k| net.residual_bw(link(k)) >= req.bw(vl));
    let hosts = |j: usize| -> Vec<usize> {
        if j == 0 {
            vec![0]
        } else {
            (1..m).filter(|&k| net.residual_cpu(node(k)) >= req.cpu(j)).collect()
        }
    };
    let mut out = BTreeSet::new();
    for j in 1..n {
        let before = out.len();
        for a in hosts(j - 1) {
            for b in hosts(j) {
                if b > a && seg_ok(j - 1, a, b) {
                    out.insert((j - 1, node(a), node(b), b - a));
                }
            }
        }
        if out.len() == before {
            return out;
        }
    }
    for a in hosts(n - 1) {
        if a > 0 && seg_ok(n - 1, a, m) {
            out.insert((n - 1, node(a), start, m - a));
        }
    }
    out
}

/// Layer-size and arc-count bounds of a WDAG on an `m`-SN ring for an
/// `n`-VN request.
pub fn wdag_within_bounds(w: &Wdag, m: usize, n: usize) -> bool {
    w.layers.iter().all(|l| l.len() <= m) && w.arc_count() <= m * m * n
}
