//! The naive reduction: keep only canonical terminal-to-terminal shortest
//! paths, then contract away degree-2 non-terminals.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::path::canonical_spt;
use crate::witness::{MinorOp, Witness};
use std::collections::{BTreeMap, BTreeSet};

/// Output of a reduction: the reduced graph, the replayable witness against
/// the input, and the identity map from surviving vertices to originals
/// (survivors keep their ids).
#[derive(Debug, Clone)]
pub struct ReductionResult {
    pub reduced: Graph,
    pub witness: Witness,
    pub retained: BTreeMap<VertexId, VertexId>,
}

impl ReductionResult {
    fn new(input: &Graph, reduced: Graph, ops: Vec<MinorOp>) -> ReductionResult {
        let retained = reduced.vertices().map(|v| (v, v)).collect();
        ReductionResult {
            reduced,
            witness: Witness {
                fingerprint: input.fingerprint(),
                ops,
            },
            retained,
        }
    }
}

fn check_terminal_args(g: &Graph, r: &BTreeSet<VertexId>) -> Result<()> {
    for &t in r {
        if !g.has_vertex(t) {
            return Err(Error::UnknownVertex(t));
        }
    }
    // every flagged terminal must be protected by the supplied set, or the
    // recorded deletions could target a terminal and fail at replay
    for t in g.terminals() {
        if !r.contains(&t) {
            return Err(Error::FlaggedTerminalOutsideSet(t));
        }
    }
    Ok(())
}

/// Keep exactly the terminals plus everything on some canonical
/// terminal-pair shortest path; delete the rest. Terminal-pair distances are
/// unchanged (absent stays absent).
pub fn restrict_to_shortest_paths(g: &Graph, r: &BTreeSet<VertexId>) -> Result<ReductionResult> {
    check_terminal_args(g, r)?;
    let terms: Vec<VertexId> = r.iter().copied().collect();
    let mut keep_v: BTreeSet<VertexId> = r.clone();
    let mut keep_e: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    for (i, &s) in terms.iter().enumerate() {
        if i + 1 == terms.len() {
            break;
        }
        let spt = canonical_spt(g, s)?;
        for &t in &terms[i + 1..] {
            if let Some(path) = spt.path_to(t) {
                keep_v.extend(path.vertices.iter().copied());
                keep_e.extend(path.edge_pairs());
            }
        }
    }
    let mut ops: Vec<MinorOp> = Vec::new();
    for (u, v, _) in g.edges() {
        if !keep_e.contains(&(u, v)) && keep_v.contains(&u) && keep_v.contains(&v) {
            ops.push(MinorOp::DeleteEdge(u, v));
        }
    }
    for v in g.vertices() {
        if !keep_v.contains(&v) {
            ops.push(MinorOp::DeleteVertex(v));
        }
    }
    let mut reduced = g.clone();
    for op in &ops {
        reduced.apply_in_place(op)?;
    }
    Ok(ReductionResult::new(g, reduced, ops))
}

/// Repeatedly contract a degree-2 non-terminal `v` with neighbors `u, w`
/// into `u`, replacing the 2-path by an edge of the same total length
/// (min-merged with any existing `(u, w)` edge). Non-terminals are processed
/// in ascending id order for witness determinism.
pub fn contract_degree2(g: &Graph, r: &BTreeSet<VertexId>) -> Result<ReductionResult> {
    check_terminal_args(g, r)?;
    let mut cur = g.clone();
    let mut ops: Vec<MinorOp> = Vec::new();
    loop {
        let candidate = cur
            .vertices()
            .find(|v| !r.contains(v) && cur.degree(*v) == 2);
        let Some(v) = candidate else {
            break;
        };
        let u = cur.neighbors(v).min().unwrap();
        let op = MinorOp::ContractEdge { u, v, survivor: u };
        cur.apply_in_place(&op)?;
        ops.push(op);
    }
    Ok(ReductionResult::new(g, cur, ops))
}

/// The full naive reduction: restriction then degree-2 contraction, with
/// the concatenated witness. The output preserves every terminal-pair
/// distance exactly and dominates all surviving pairwise distances.
pub fn reduce_naive(g: &Graph, r: &BTreeSet<VertexId>) -> Result<ReductionResult> {
    let first = restrict_to_shortest_paths(g, r)?;
    let second = contract_degree2(&first.reduced, r)?;
    let mut ops = first.witness.ops;
    ops.extend(second.witness.ops);
    Ok(ReductionResult::new(g, second.reduced, ops))
}
