//! Error types shared across the crate.

use crate::graph::VertexId;
use crate::td::TdViolation;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex id {0} out of range 1..={1}")]
    IdOutOfRange(u32, u32),
    #[error("edge length must be nonnegative and finite")]
    BadLength,
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(u32),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("no edge between {0} and {1}")]
    UnknownEdge(VertexId, VertexId),
    #[error("cannot delete terminal vertex {0}")]
    DeleteTerminal(VertexId),
    #[error("cannot contract terminal-terminal edge ({0}, {1})")]
    ContractTerminalPair(VertexId, VertexId),
    #[error("survivor {survivor} is invalid for contraction of ({u}, {v})")]
    BadSurvivor {
        u: VertexId,
        v: VertexId,
        survivor: VertexId,
    },
    #[error("length mode mismatch between operands")]
    ModeMismatch,
    #[error("terminal flag conflict on shared vertex {0}")]
    TerminalFlagConflict(VertexId),
    #[error("witness fingerprint {actual:016x} does not match graph fingerprint {expected:016x}")]
    FingerprintMismatch { expected: u64, actual: u64 },
    #[error("witness replay failed at op {op_index}: {source}")]
    ReplayFailed {
        op_index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("terminal {0} is not a vertex of the graph")]
    TerminalNotVertex(VertexId),
    #[error("flagged terminal {0} missing from the supplied terminal set")]
    FlaggedTerminalOutsideSet(VertexId),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("invalid tree decomposition: {0}")]
    InvalidTreeDecomposition(TdViolation),
    #[error("no bag of the decomposition is a balanced separator")]
    NoBalancedSeparator,
    #[error("separator invariant violated: {0}")]
    SeparatorInvariant(String),
    #[error("{0}")]
    BadParameter(String),
    #[error("grid size k={k} exceeds the default cap {cap} (exact denominators grow as 2^((k-1)^2))")]
    GridTooLarge { k: u32, cap: u32 },
    #[error("exact arithmetic required: {0}")]
    ExactModeRequired(String),
    #[error("graph has {n} vertices, exceeding the search budget of {max}")]
    SearchTooLarge { n: usize, max: usize },
    #[error("degenerate configuration persisted across {0} regeneration attempts")]
    DegenerateArrangement(u32),
}

pub type Result<T> = std::result::Result<T, Error>;
