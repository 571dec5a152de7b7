//! Minor operations and the witness log: a replayable certificate that one
//! graph is a minor of another.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// A single minor operation. Terminals may absorb non-terminals under
/// contraction but are never deleted or merged with each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinorOp {
    DeleteVertex(VertexId),
    DeleteEdge(VertexId, VertexId),
    ContractEdge {
        u: VertexId,
        v: VertexId,
        survivor: VertexId,
    },
}

/// Ordered log of minor operations, pinned to the originating graph by
/// fingerprint. Replaying the log on that graph reproduces the reduced
/// graph field for field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub fingerprint: u64,
    pub ops: Vec<MinorOp>,
}

impl Witness {
    pub fn new(origin: &Graph) -> Witness {
        Witness {
            fingerprint: origin.fingerprint(),
            ops: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Replay a witness on its originating graph. Fails if the fingerprint is
/// stale or any operation's precondition does not hold at its turn; the
/// error identifies the failing op index.
pub fn replay_witness(g: &Graph, w: &Witness) -> Result<Graph> {
    let fp = g.fingerprint();
    if fp != w.fingerprint {
        return Err(Error::FingerprintMismatch {
            expected: fp,
            actual: w.fingerprint,
        });
    }
    let mut cur = g.clone();
    for (i, op) in w.ops.iter().enumerate() {
        cur.apply_in_place(op).map_err(|e| Error::ReplayFailed {
            op_index: i,
            source: Box::new(e),
        })?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::length::{Length, LengthMode};
    use std::collections::BTreeSet;

    fn path_graph(edges: u32) -> Graph {
        let terms: BTreeSet<u32> = [1, edges + 1].into_iter().collect();
        let es: Vec<(u32, u32, Length)> = (1..=edges)
            .map(|i| (i, i + 1, Length::from_int(1)))
            .collect();
        Graph::build(edges + 1, &terms, &es, LengthMode::Exact).unwrap()
    }

    #[test]
    fn empty_witness_is_identity() {
        let g = path_graph(3);
        let w = Witness::new(&g);
        assert_eq!(replay_witness(&g, &w).unwrap(), g);
    }

    #[test]
    fn contracting_a_unit_path_yields_single_edge_of_full_length() {
        // a path of n unit edges reduces to a single edge of length n
        let g = path_graph(5);
        let mut w = Witness::new(&g);
        for v in 2..=5 {
            w.ops.push(MinorOp::ContractEdge {
                u: VertexId(1),
                v: VertexId(v),
                survivor: VertexId(1),
            });
        }
        let r = replay_witness(&g, &w).unwrap();
        assert_eq!(r.vertex_count(), 2);
        assert_eq!(
            r.edge(VertexId(1), VertexId(6)).unwrap().length,
            Length::from_int(5)
        );
    }

    #[test]
    fn stale_fingerprint_rejected() {
        let g = path_graph(2);
        let other = path_graph(3);
        let w = Witness::new(&other);
        assert!(matches!(
            replay_witness(&g, &w),
            Err(Error::FingerprintMismatch { .. })
        ));
    }

    #[test]
    fn replay_reports_failing_op_index() {
        let g = path_graph(2);
        let mut w = Witness::new(&g);
        w.ops.push(MinorOp::DeleteEdge(VertexId(1), VertexId(2)));
        w.ops.push(MinorOp::DeleteEdge(VertexId(1), VertexId(2)));
        match replay_witness(&g, &w) {
            Err(Error::ReplayFailed { op_index, .. }) => assert_eq!(op_index, 1),
            other => panic!("unexpected: {:?}", other),
        }
    }

    #[test]
    fn replay_is_deterministic() {
        let g = path_graph(4);
        let mut w = Witness::new(&g);
        w.ops.push(MinorOp::ContractEdge {
            u: VertexId(2),
            v: VertexId(3),
            survivor: VertexId(2),
        });
        let a = replay_witness(&g, &w).unwrap();
        let b = replay_witness(&g, &w).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.fingerprint(), b.fingerprint());
    }
}
