//! Seeded random instance families used by tests and benchmarks. All
//! randomness flows through one explicit 64-bit seed.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::length::{Length, LengthMode};
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn random_rational(rng: &mut ChaCha8Rng) -> Length {
    let num = rng.gen_range(1..=20i64);
    let den = rng.gen_range(1..=6i64);
    Length::from_ratio(num, den).unwrap()
}

/// Connected random graph: a random recursive spanning tree plus extra
/// edges up to `m`, rational lengths, `k` random terminals.
pub fn gen_random_connected(
    n: u32,
    m: u32,
    k: u32,
    seed: u64,
) -> Result<(Graph, BTreeSet<VertexId>)> {
    if n < 2 || k > n || m < n - 1 {
        return Err(Error::BadParameter(
            "need n >= 2, k <= n, m >= n - 1".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut edges: Vec<(u32, u32, Length)> = Vec::new();
    for v in 2..=n {
        let u = rng.gen_range(1..v);
        pairs.insert((u, v));
        edges.push((u, v, random_rational(&mut rng)));
    }
    let max_edges = (n as u64 * (n as u64 - 1)) / 2;
    let target = (m as u64).min(max_edges) as usize;
    while edges.len() < target {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u == v {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if pairs.insert(key) {
            edges.push((key.0, key.1, random_rational(&mut rng)));
        }
    }
    let mut ids: Vec<u32> = (1..=n).collect();
    ids.shuffle(&mut rng);
    let terminals: BTreeSet<u32> = ids.into_iter().take(k as usize).collect();
    let g = Graph::build(n, &terminals, &edges, LengthMode::Exact)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}

/// Uniform random labeled tree on `n` vertices (decoded from a random
/// Pruefer sequence) with unit lengths and `k` random terminals.
pub fn gen_random_tree(n: u32, k: u32, seed: u64) -> Result<(Graph, BTreeSet<VertexId>)> {
    if n < 2 || k > n {
        return Err(Error::BadParameter("need n >= 2 and k <= n".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = prufer_tree(n, &mut rng);
    let mut ids: Vec<u32> = (1..=n).collect();
    ids.shuffle(&mut rng);
    let terminals: BTreeSet<u32> = ids.into_iter().take(k as usize).collect();
    let g = Graph::build(n, &terminals, &edges, LengthMode::Exact)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}

/// Uniform random labeled tree whose leaves are the terminals. Draws with
/// derived seeds until the leaf count matches `leaves` exactly.
pub fn gen_random_tree_with_leaves(
    n: u32,
    leaves: u32,
    seed: u64,
) -> Result<(Graph, BTreeSet<VertexId>)> {
    if n < 3 || leaves < 2 || leaves > n - 1 {
        return Err(Error::BadParameter("infeasible leaf count".into()));
    }
    for attempt in 0..20_000u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let edges = prufer_tree(n, &mut rng);
        let mut degree = vec![0u32; n as usize + 1];
        for &(u, v, _) in &edges {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let leaf_ids: BTreeSet<u32> = (1..=n).filter(|&v| degree[v as usize] == 1).collect();
        if leaf_ids.len() == leaves as usize {
            let g = Graph::build(n, &leaf_ids, &edges, LengthMode::Exact)?;
            return Ok((g, leaf_ids.into_iter().map(VertexId).collect()));
        }
    }
    Err(Error::BadParameter(format!(
        "no tree on {} vertices with exactly {} leaves found",
        n, leaves
    )))
}

fn prufer_tree(n: u32, rng: &mut ChaCha8Rng) -> Vec<(u32, u32, Length)> {
    if n == 2 {
        return vec![(1, 2, Length::from_int(1))];
    }
    let seq: Vec<u32> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1u32; n as usize + 1];
    for &s in &seq {
        degree[s as usize] += 1;
    }
    let mut leaves: BTreeSet<u32> = (1..=n).filter(|&v| degree[v as usize] == 1).collect();
    let mut edges = Vec::new();
    for &s in &seq {
        let leaf = *leaves.iter().next().unwrap();
        leaves.remove(&leaf);
        edges.push((leaf.min(s), leaf.max(s), Length::from_int(1)));
        degree[s as usize] -= 1;
        if degree[s as usize] == 1 {
            leaves.insert(s);
        }
    }
    let rest: Vec<u32> = leaves.into_iter().collect();
    debug_assert_eq!(rest.len(), 2);
    edges.push((rest[0].min(rest[1]), rest[0].max(rest[1]), Length::from_int(1)));
    edges
}

/// Random 2-tree: a triangle grown by repeatedly attaching a new vertex to
/// both endpoints of a random existing edge. Treewidth exactly 2; rational
/// lengths; `k` random terminals.
pub fn gen_random_2tree(n: u32, k: u32, seed: u64) -> Result<(Graph, BTreeSet<VertexId>)> {
    if n < 3 || k > n {
        return Err(Error::BadParameter("need n >= 3 and k <= n".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edge_list: Vec<(u32, u32)> = vec![(1, 2), (1, 3), (2, 3)];
    for v in 4..=n {
        let &(a, b) = &edge_list[rng.gen_range(0..edge_list.len())];
        edge_list.push((a, v));
        edge_list.push((b, v));
    }
    let edges: Vec<(u32, u32, Length)> = edge_list
        .into_iter()
        .map(|(u, v)| (u, v, random_rational(&mut rng)))
        .collect();
    let mut ids: Vec<u32> = (1..=n).collect();
    ids.shuffle(&mut rng);
    let terminals: BTreeSet<u32> = ids.into_iter().take(k as usize).collect();
    let g = Graph::build(n, &terminals, &edges, LengthMode::Exact)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}
