//! Reduction algorithms producing distance-preserving minors.

pub mod naive;
pub mod tw;

pub use naive::{contract_degree2, reduce_naive, restrict_to_shortest_paths, ReductionResult};
pub use tw::{
    balanced_separator, reduce_tw, BoundViolation, RecursionNode, RecursionStats, SeparatorTriple,
};
