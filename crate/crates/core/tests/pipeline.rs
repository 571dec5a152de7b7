//! Cross-module checks backed by independent oracles: a cubic
//! relaxation APSP, brute-force path enumeration, and exhaustive search on
//! small trees.

use dpm_core::gen::{gen_random_connected, gen_random_tree};
use dpm_core::path::PerturbationKey;
use dpm_core::reduce::reduce_naive;
use dpm_core::verify::{verify_distance_preserving, verify_domination};
use dpm_core::{
    apsp, canonical_shortest_path, minimize_exact, replay_witness, Graph, Length, LengthMode,
    MinorOp, SearchBudget, VertexId,
};
use proptest::prelude::*;
use std::collections::BTreeSet;

/// Floyd-Warshall over Length values: an independent |V|^3 relaxation
/// oracle, no Dijkstra and no perturbation keys anywhere.
fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<Length>>> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let mut d: Vec<Vec<Option<Length>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(Length::zero(g.mode()));
    }
    for (u, v, data) in g.edges() {
        let i = verts.iter().position(|&x| x == u).unwrap();
        let j = verts.iter().position(|&x| x == v).unwrap();
        if d[i][j].as_ref().is_none_or(|cur| data.length < *cur) {
            d[i][j] = Some(data.length.clone());
            d[j][i] = Some(data.length.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let (Some(a), Some(b)) = (&d[i][k], &d[k][j]) else {
                    continue;
                };
                let via = a + b;
                if d[i][j].as_ref().is_none_or(|cur| via < *cur) {
                    d[i][j] = Some(via);
                }
            }
        }
    }
    d
}

#[test]
fn apsp_matches_cubic_relaxation_oracle() {
    for seed in [7u64, 8, 9] {
        let (g, _) = gen_random_connected(20, 35, 5, seed).unwrap();
        let verts: Vec<VertexId> = g.vertices().collect();
        let fw = floyd_warshall(&g);
        let m = apsp(&g, &verts).unwrap();
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate() {
                assert_eq!(m.get(u, v), fw[i][j].as_ref(), "seed {} {} {}", seed, u, v);
            }
        }
        // triangle inequality over present entries
        for &a in &verts {
            for &b in &verts {
                for &c in &verts {
                    if let (Some(ab), Some(bc), Some(ac)) =
                        (m.get(a, b), m.get(b, c), m.get(a, c))
                    {
                        assert!(*ac <= &(ab + bc) + &Length::zero(g.mode()));
                    }
                }
            }
        }
    }
}

/// Enumerate every simple path and pick the (length, key) minimum: the
/// specification of the canonical path, independent of Dijkstra.
fn brute_canonical(g: &Graph, s: VertexId, t: VertexId) -> Option<(Length, Vec<VertexId>)> {
    fn dfs(
        g: &Graph,
        cur: VertexId,
        t: VertexId,
        seen: &mut Vec<VertexId>,
        acc_len: Length,
        acc_idx: Vec<dpm_core::EdgeIndex>,
        best: &mut Option<(Length, PerturbationKey, Vec<VertexId>)>,
    ) {
        if cur == t {
            let key = PerturbationKey::from_indices(acc_idx);
            let cand = (acc_len, key, seen.clone());
            let better = match best {
                None => true,
                Some((bl, bk, _)) => (&cand.0, &cand.1) < (&*bl, &*bk),
            };
            if better {
                *best = Some(cand);
            }
            return;
        }
        for w in g.neighbors(cur).collect::<Vec<_>>() {
            if seen.contains(&w) {
                continue;
            }
            let e = g.edge(cur, w).unwrap();
            seen.push(w);
            let mut idx = acc_idx.clone();
            idx.push(e.index);
            dfs(g, w, t, seen, &acc_len + &e.length, idx, best);
            seen.pop();
        }
    }
    let mut best = None;
    let mut seen = vec![s];
    dfs(
        g,
        s,
        t,
        &mut seen,
        Length::zero(g.mode()),
        Vec::new(),
        &mut best,
    );
    best.map(|(l, _, vs)| (l, vs))
}

fn arb_small_graph() -> impl Strategy<Value = (Graph, Vec<VertexId>)> {
    (3u32..=8)
        .prop_flat_map(|n| {
            let edges = proptest::collection::vec(
                (1..=n, 1..=n, 1i64..=9, 1i64..=3),
                1..=(n as usize * 2),
            );
            let terminals = proptest::collection::btree_set(1..=n, 2..=(n as usize).min(4));
            (Just(n), edges, terminals)
        })
        .prop_filter_map("needs at least one edge", |(n, raw, terms)| {
            let edges: Vec<(u32, u32, Length)> = raw
                .into_iter()
                .filter(|(u, v, _, _)| u != v)
                .map(|(u, v, num, den)| (u, v, Length::from_ratio(num, den).unwrap()))
                .collect();
            if edges.is_empty() {
                return None;
            }
            let g = Graph::build(n, &terms, &edges, LengthMode::Exact).ok()?;
            let t: Vec<VertexId> = terms.into_iter().map(VertexId).collect();
            Some((g, t))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_path_matches_brute_force_and_is_subpath_closed(
        (g, _) in arb_small_graph()
    ) {
        let verts: Vec<VertexId> = g.vertices().collect();
        for &u in &verts {
            for &v in &verts {
                if u >= v { continue; }
                let fast = canonical_shortest_path(&g, u, v).unwrap();
                let brute = brute_canonical(&g, u, v);
                match (fast, brute) {
                    (None, None) => {}
                    (Some(p), Some((bl, bvs))) => {
                        prop_assert_eq!(&p.total, &bl);
                        prop_assert_eq!(&p.vertices, &bvs);
                        // every contiguous subpath is itself canonical
                        let m = p.vertices.len();
                        for i in 0..m {
                            for j in i + 1..m {
                                let sub = canonical_shortest_path(&g, p.vertices[i], p.vertices[j])
                                    .unwrap()
                                    .unwrap();
                                prop_assert_eq!(&sub.vertices[..], &p.vertices[i..=j]);
                            }
                        }
                    }
                    (a, b) => prop_assert!(false, "reachability disagrees: {:?} vs {:?}", a.is_some(), b.is_some()),
                }
            }
        }
    }

    #[test]
    fn union_is_commutative_and_associative(
        (g1, _) in arb_small_graph(),
        (g2, _) in arb_small_graph(),
        (g3, _) in arb_small_graph()
    ) {
        // strip flags so unions cannot conflict
        let strip = |g: &Graph| {
            let edges: Vec<(u32, u32, Length)> = g
                .edges()
                .map(|(u, v, d)| (u.0, v.0, d.length.clone()))
                .collect();
            let n = g.vertices().map(|v| v.0).max().unwrap();
            Graph::build(n, &BTreeSet::new(), &edges, LengthMode::Exact).unwrap()
        };
        let (a, b, c) = (strip(&g1), strip(&g2), strip(&g3));
        prop_assert_eq!(a.union(&b).unwrap(), b.union(&a).unwrap());
        let left = a.union(&b).unwrap().union(&c).unwrap();
        let right = a.union(&b.union(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn minor_ops_never_shrink_distances(
        (g, _) in arb_small_graph(),
        pick in 0usize..64
    ) {
        // collect the legal ops and apply one
        let mut ops: Vec<MinorOp> = Vec::new();
        for v in g.vertices() {
            if !g.is_terminal(v) {
                ops.push(MinorOp::DeleteVertex(v));
            }
        }
        for (u, v, _) in g.edges() {
            ops.push(MinorOp::DeleteEdge(u, v));
            match (g.is_terminal(u), g.is_terminal(v)) {
                (true, true) => {}
                (true, false) => ops.push(MinorOp::ContractEdge { u, v, survivor: u }),
                (false, true) => ops.push(MinorOp::ContractEdge { u, v, survivor: v }),
                (false, false) => {
                    ops.push(MinorOp::ContractEdge { u, v, survivor: u });
                    ops.push(MinorOp::ContractEdge { u, v, survivor: v });
                }
            }
        }
        prop_assume!(!ops.is_empty());
        let op = &ops[pick % ops.len()];
        let g2 = g.apply_minor_op(op).unwrap();
        let survivors: Vec<VertexId> = g2.vertices().collect();
        let before = apsp(&g, &survivors).unwrap();
        let after = apsp(&g2, &survivors).unwrap();
        for (u, v) in before.pairs() {
            match (before.get(u, v), after.get(u, v)) {
                (Some(a), Some(b)) => prop_assert!(b >= a, "{} {} shrank", u, v),
                (Some(_), None) | (None, None) => {}
                (None, Some(_)) => prop_assert!(false, "op created connectivity"),
            }
        }
    }

    #[test]
    fn graph_files_round_trip((g, _) in arb_small_graph()) {
        let text = dpm_core::io::write_graph(&g);
        let back = dpm_core::io::read_graph(&text).unwrap();
        prop_assert_eq!(g, back);
    }

    #[test]
    fn reduce_naive_invariants_hold((g, terms) in arb_small_graph()) {
        let r: BTreeSet<VertexId> = terms.iter().copied().collect();
        prop_assume!(g.terminals().iter().all(|t| r.contains(t)));
        let res = reduce_naive(&g, &r).unwrap();
        let rep = verify_distance_preserving(&g, &res.reduced, &terms).unwrap();
        prop_assert!(rep.pass());
        let dom = verify_domination(&g, &res.reduced, &res.retained).unwrap();
        prop_assert!(dom.pass());
        prop_assert_eq!(&replay_witness(&g, &res.witness).unwrap(), &res.reduced);
        // fixpoint
        let again = reduce_naive(&res.reduced, &r).unwrap();
        prop_assert_eq!(&again.reduced, &res.reduced);
        prop_assert!(again.witness.is_empty());
    }
}

#[test]
fn small_trees_minimize_within_the_tree_bound() {
    // exhaustive search on trees with <= 8 vertices never needs more than
    // 2k - 2 vertices
    for seed in 0..12u64 {
        let n = 5 + (seed % 4) as u32; // 5..=8
        let (g, r) = gen_random_tree(n, 0, seed).unwrap();
        // terminals: the leaves
        let leaves: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) == 1).collect();
        if leaves.len() < 2 {
            continue;
        }
        let leafset: BTreeSet<u32> = leaves.iter().map(|v| v.0).collect();
        let edges: Vec<(u32, u32, Length)> = g
            .edges()
            .map(|(u, v, d)| (u.0, v.0, d.length.clone()))
            .collect();
        let g = Graph::build(n, &leafset, &edges, LengthMode::Exact).unwrap();
        let _ = r;
        let out = minimize_exact(&g, &leaves, &SearchBudget::default()).unwrap();
        assert!(out.exhaustive);
        let k = leaves.len();
        assert!(
            out.min_vertices <= (2 * k).saturating_sub(2).max(1),
            "seed {}: {} leaves, min {}",
            seed,
            k,
            out.min_vertices
        );
    }
}

#[test]
fn naive_never_exceeds_tw_on_shared_instances() {
    // observed relationship (reported in the divide-and-conquer module as
    // well): the naive output is never larger
    for seed in [61u64, 62, 63] {
        let (g, r) = gen_random_tree(200, 48, seed).unwrap();
        let td = dpm_core::heuristic_tree_decomposition(&g);
        let naive = reduce_naive(&g, &r).unwrap();
        let (tw, _) = dpm_core::reduce_tw(&g, &r, &td).unwrap();
        println!(
            "seed {}: naive |V'| = {}, tw |V'| = {}",
            seed,
            naive.reduced.vertex_count(),
            tw.reduced.vertex_count()
        );
        assert!(naive.reduced.vertex_count() <= tw.reduced.vertex_count());
    }
}
