//! Distance-preserving minors of weighted graphs with terminals.
//!
//! A distance-preserving minor of a graph `G` with terminal set `R` is a
//! minor `G'` (with its own edge lengths) containing every terminal, in
//! which all terminal-pair shortest-path distances equal those of `G`
//! exactly. This crate provides:
//!
//! - a weighted-graph core with witness-logged minor operations, canonical
//!   (consistently tie-broken) shortest paths, and exact rational lengths;
//! - the naive reduction (restrict to terminal shortest paths, contract
//!   degree-2 non-terminals) and the separator-driven divide-and-conquer
//!   reduction over a tree decomposition, with recursion instrumentation;
//! - generators for the extremal families: paths, complete binary trees,
//!   the lower-bound grid, disjoint grid blocks of bounded treewidth, and
//!   random line arrangements in the unit square;
//! - verification oracles (distance preservation, domination, witness
//!   replay, size bounds) and an exhaustive minimum search for tiny graphs.
//!
//! Everything is deterministic: tie-breaking is realized by exact binary
//! perturbation keys over stable edge indices, and all randomness flows
//! through explicit 64-bit seeds.

pub mod error;
pub mod gen;
pub mod graph;
pub mod io;
pub mod length;
pub mod minimize;
pub mod path;
pub mod reduce;
pub mod td;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{EdgeData, EdgeIndex, Graph, VertexId};
pub use length::{Length, LengthMode};
pub use minimize::{minimize_exact, MinimizeOutcome, SearchBudget};
pub use path::{apsp, canonical_shortest_path, DistanceMatrix, PathResult, PerturbationKey};
pub use reduce::{reduce_naive, reduce_tw, RecursionStats, ReductionResult};
pub use td::{heuristic_tree_decomposition, TreeDecomposition};
pub use verify::{
    size_bound_report, verify_distance_preserving, verify_domination, verify_witness_replay,
    SizeFamily, VerificationReport,
};
pub use witness::{replay_witness, MinorOp, Witness};
