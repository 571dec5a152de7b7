//! Generators for the extremal benchmark families, emitting exact-rational
//! instances wherever the construction's arithmetic demands it.

pub mod arrangement;
pub mod random;

pub use arrangement::{gen_line_arrangement, Arrangement};
pub use random::{
    gen_random_2tree, gen_random_connected, gen_random_tree, gen_random_tree_with_leaves,
};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::length::{Length, LengthMode};
use crate::td::TreeDecomposition;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::One;
use std::collections::BTreeSet;

/// Default cap on the grid parameter: exact denominators grow as
/// 2^((k-1)^2) * k, so larger instances need an explicit override.
pub const GRID_K_CAP: u32 = 16;

/// A path of `n` edges of the given length; the endpoints are the terminals.
pub fn gen_path(n: u32, len: Length) -> Result<(Graph, BTreeSet<VertexId>)> {
    if n < 1 {
        return Err(Error::BadParameter("path needs at least one edge".into()));
    }
    let mode = len.mode();
    let edges: Vec<(u32, u32, Length)> = (1..=n).map(|i| (i, i + 1, len.clone())).collect();
    let terminals: BTreeSet<u32> = [1, n + 1].into_iter().collect();
    let g = Graph::build(n + 1, &terminals, &edges, mode)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}

/// Complete binary tree of the given depth with unit lengths; the 2^depth
/// leaves are the terminals. Vertices are numbered heap-style from the root.
pub fn gen_complete_binary_tree(depth: u32) -> Result<(Graph, BTreeSet<VertexId>)> {
    if depth < 1 {
        return Err(Error::BadParameter("depth must be at least 1".into()));
    }
    if depth > 20 {
        return Err(Error::BadParameter("depth too large".into()));
    }
    let n = (1u32 << (depth + 1)) - 1;
    let first_leaf = 1u32 << depth;
    let mut edges = Vec::new();
    for v in 1..first_leaf {
        edges.push((v, 2 * v, Length::from_int(1)));
        edges.push((v, 2 * v + 1, Length::from_int(1)));
    }
    let terminals: BTreeSet<u32> = (first_leaf..=n).collect();
    let g = Graph::build(n, &terminals, &edges, LengthMode::Exact)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}

/// Vertex id of grid point (x, y) in a k-by-k grid with an id offset.
fn grid_id(k: u32, x: u32, y: u32, offset: u32) -> u32 {
    offset + x * k + y + 1
}

fn grid_edges(k: u32, offset: u32) -> Vec<(u32, u32, Length)> {
    let mut edges = Vec::new();
    // horizontal edges have length 1
    for x in 0..k - 1 {
        for y in 0..k {
            edges.push((
                grid_id(k, x, y, offset),
                grid_id(k, x + 1, y, offset),
                Length::from_int(1),
            ));
        }
    }
    // the vertical edge at column x has length 1 + 1/(2^(x^2) * k)
    for x in 0..k {
        let denom = BigInt::from(k) * (BigInt::one() << ((x * x) as usize));
        let len = Length::Exact(
            BigRational::one() + BigRational::new(BigInt::one(), denom),
        );
        for y in 0..k - 1 {
            edges.push((
                grid_id(k, x, y, offset),
                grid_id(k, x, y + 1, offset),
                len.clone(),
            ));
        }
    }
    edges
}

fn grid_terminals(k: u32, offset: u32) -> BTreeSet<u32> {
    let mut r = BTreeSet::new();
    for y in 0..k / 2 {
        r.insert(grid_id(k, 0, y, offset)); // R1 = {(0, y)}
    }
    for x in k / 2..k {
        r.insert(grid_id(k, x, x, offset)); // R2 = {(x, x)}
    }
    r
}

/// The k-by-k lower-bound grid: horizontal lengths 1, vertical lengths
/// 1 + 1/(2^(x^2) * k) at column x, terminals on the left edge and the
/// lower-right diagonal. Exact mode is mandatory.
pub fn gen_grid_lb(k: u32) -> Result<(Graph, BTreeSet<VertexId>)> {
    gen_grid_lb_with_cap(k, GRID_K_CAP)
}

pub fn gen_grid_lb_with_cap(k: u32, cap: u32) -> Result<(Graph, BTreeSet<VertexId>)> {
    if k < 4 || !k.is_multiple_of(2) {
        return Err(Error::BadParameter(
            "grid parameter k must be even and at least 4".into(),
        ));
    }
    if k > cap {
        return Err(Error::GridTooLarge { k, cap });
    }
    let terminals = grid_terminals(k, 0);
    let g = Graph::build(k * k, &terminals, &grid_edges(k, 0), LengthMode::Exact)?;
    Ok((g, terminals.into_iter().map(VertexId).collect()))
}

/// Grid point of a terminal or vertex id, for tests and reports.
pub fn grid_vertex(k: u32, x: u32, y: u32) -> VertexId {
    VertexId(grid_id(k, x, y, 0))
}

/// k/p disjoint copies of the p-by-p lower-bound grid, with a bundled
/// width-p path decomposition (sliding window of p+1 consecutive vertices in
/// column-major order per block, blocks chained).
pub fn gen_tw_family(
    p: u32,
    k: u32,
) -> Result<(Graph, BTreeSet<VertexId>, TreeDecomposition)> {
    if p < 4 || !p.is_multiple_of(2) {
        return Err(Error::BadParameter(
            "block parameter p must be even and at least 4".into(),
        ));
    }
    if k == 0 || !k.is_multiple_of(p) {
        return Err(Error::BadParameter(
            "terminal count k must be a positive multiple of p".into(),
        ));
    }
    if p > GRID_K_CAP {
        return Err(Error::GridTooLarge { k: p, cap: GRID_K_CAP });
    }
    let blocks = k / p;
    let mut edges = Vec::new();
    let mut terminals = BTreeSet::new();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut tree: Vec<(usize, usize)> = Vec::new();
    for b in 0..blocks {
        let offset = b * p * p;
        edges.extend(grid_edges(p, offset));
        terminals.extend(grid_terminals(p, offset));
        let first_new_bag = bags.len();
        // window bags cover both the vertical (adjacent order) and the
        // horizontal (order distance p) edges of the block
        for t in 0..(p * p - p) {
            let bag: BTreeSet<VertexId> =
                (t..=t + p).map(|i| VertexId(offset + i + 1)).collect();
            bags.push(bag);
            let idx = bags.len() - 1;
            if idx > first_new_bag {
                tree.push((idx - 1, idx));
            }
        }
        if first_new_bag > 0 {
            tree.push((first_new_bag - 1, first_new_bag));
        }
    }
    let g = Graph::build(blocks * p * p, &terminals, &edges, LengthMode::Exact)?;
    let td = TreeDecomposition { bags, tree };
    Ok((
        g,
        terminals.into_iter().map(VertexId).collect(),
        td,
    ))
}
