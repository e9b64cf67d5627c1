mod common;

use proptest::prelude::*;
use vne_core::baseline::{generic_batch, generic_embed, GenericEmbedder};
use vne_core::cycle::{c2ce, greedy_revenue};
use vne_core::knapsack::{solve_kp_dp, KpItem};
use vne_core::path::{decompose_paths, procedure_pe, PeConfig};
use vne_core::{validate_embedding, Instance, SubstrateNetwork, VirtualRequest};

use common::*;

fn ring_case() -> impl Strategy<Value = (SubstrateNetwork, VirtualRequest)> {
    (3usize..=8).prop_flat_map(|m| {
        (
            prop::collection::vec(1u64..=8, m),
            prop::collection::vec(1u64..=8, m),
            (3usize..=m.min(5)).prop_flat_map(|n| {
                (prop::collection::vec(1u64..=5, n), prop::collection::vec(1u64..=5, n))
            }),
        )
            .prop_map(|(cpu, bw, (dc, db))| (ring(cpu, bw), VirtualRequest::cycle(0, dc, db, 1).unwrap()))
    })
}

/// Connected graph on `n` SNs: a random tree plus extra pairs.
fn connected_net() -> impl Strategy<Value = SubstrateNetwork> {
    (2usize..=9).prop_flat_map(|n| {
        (
            prop::collection::vec(any::<prop::sample::Index>(), n - 1),
            prop::collection::vec((0..n, 0..n), 0..2 * n),
            prop::collection::vec(1u64..=12, n),
            prop::collection::vec(1u64..=12, n * n),
        )
            .prop_map(move |(parents, extra, cpu, bws)| {
                let mut pairs: Vec<(usize, usize)> = (1..n).map(|v| (parents[v - 1].index(v), v)).collect();
                for (a, b) in extra {
                    let p = (a.min(b), a.max(b));
                    if a != b && !pairs.iter().any(|&(x, y)| (x.min(y), x.max(y)) == p) {
                        pairs.push(p);
                    }
                }
                SubstrateNetwork::new(cpu, pairs.iter().enumerate().map(|(i, &(u, v))| (u, v, bws[i]))).unwrap()
            })
    })
}

fn path_requests(max: usize) -> impl Strategy<Value = Vec<VirtualRequest>> {
    prop::collection::vec(
        (2usize..=6).prop_flat_map(|n| {
            (prop::collection::vec(1u64..=5, n), prop::collection::vec(1u64..=5, n - 1), 1u64..=10)
        }),
        0..=max,
    )
    .prop_map(|specs| {
        specs
            .into_iter()
            .enumerate()
            .map(|(id, (c, b, w))| VirtualRequest::path(id, c, b, w).unwrap())
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn c2ce_is_optimal((net, req) in ring_case()) {
        let got = c2ce(&net, &req).unwrap();
        prop_assert_eq!(got.as_ref().map(|s| s.cost), ring_brute(&net, &req));
        if let Some(s) = got {
            prop_assert!(embedding_fits(&net, &req, &s.to_embedding()));
        }
    }

    #[test]
    fn kp_dp_is_optimal(
        items in prop::collection::vec((1u64..=12, 0u64..=30), 0..=14),
        capacity in 0u64..=50,
    ) {
        let items: Vec<KpItem> = items.into_iter().enumerate().map(|(id, (size, profit))| KpItem { id, size, profit }).collect();
        prop_assert_eq!(solve_kp_dp(capacity, &items).profit, kp_exhaustive(capacity, &items));
    }

    #[test]
    fn decomposition_partitions_usable_links(net in connected_net()) {
        let paths = decompose_paths(&net);
        let mut used = vec![0; net.edge_count()];
        for p in &paths {
            prop_assert_eq!(p.nodes().len(), p.edges().len() + 1);
            for (w, &e) in p.nodes().windows(2).zip(p.edges()) {
                prop_assert_eq!(net.edge_between(w[0], w[1]), Some(e));
                used[e] += 1;
            }
            let distinct: std::collections::BTreeSet<_> = p.nodes().iter().collect();
            prop_assert_eq!(distinct.len(), p.nodes().len());
        }
        prop_assert!(used.iter().all(|&u| u == 1));
    }

    #[test]
    fn pe_and_generic_commit_feasibly(net in connected_net(), reqs in path_requests(12)) {
        let mut work = net.clone();
        let out = procedure_pe(&mut work, &reqs, PeConfig::default()).unwrap();
        prop_assert!(replay_ok(&net, &work, &out.batch));
        let mut work = net.clone();
        let batch = generic_batch(&mut work, &reqs, &GenericEmbedder::default()).unwrap();
        prop_assert!(replay_ok(&net, &work, &batch));
    }

    #[test]
    fn generic_embedding_fits_residuals(net in connected_net(), reqs in path_requests(1), smoothing in any::<bool>()) {
        if let Some(req) = reqs.first() {
            if let Some(emb) = generic_embed(&net, req, smoothing) {
                prop_assert!(embedding_fits(&net, req, &emb));
                prop_assert!(validate_embedding(&net, req, &emb).unwrap().is_feasible());
            }
        }
    }

    #[test]
    fn gr_never_overcommits((net, req) in ring_case(), copies in 1usize..=6) {
        let reqs: Vec<VirtualRequest> = (0..copies).map(|id| req.clone().with_id(id)).collect();
        let mut work = net.clone();
        let out = greedy_revenue(&mut work, &reqs, Some(&GenericEmbedder::default())).unwrap();
        prop_assert!(replay_ok(&net, &work, &out.batch));
        prop_assert_eq!(out.via_c2ce.len() + out.via_fallback.len(), out.batch.len());
    }

    #[test]
    fn instance_json_round_trips(net in connected_net(), reqs in path_requests(4)) {
        let inst = Instance::new(net, reqs);
        prop_assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }
}

#[test]
fn fixture_costs() {
    let inst = fixture("ring4.json");
    assert_eq!(ring_brute(&inst.network, &inst.requests[0]), Some(8));
    assert_eq!(c2ce(&inst.network, &inst.requests[0]).unwrap().unwrap().cost, 8);
}
