//! Weighted undirected simple graph with terminal flags, stable edge indices,
//! minor operations, and the min-length graph union.
//!
//! Invariants: no self-loops, at most one edge per vertex pair (parallel
//! inputs collapse to the minimum length), uniform length mode, and edge
//! indices that survive minor operations unchanged.

use crate::error::{Error, Result};
use crate::length::{Length, LengthMode};
use crate::witness::MinorOp;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// 1-based vertex identifier. Ids are stable: a contraction survivor keeps
/// its id, so reduced-graph vertices map back to originals by identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// 1-based stable edge index, assigned at build time in input order.
/// Only the relative order of indices is meaningful: it defines the
/// perturbation used to break shortest-path ties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIndex(pub u32);

impl fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub(crate) fn norm_pair(u: VertexId, v: VertexId) -> (VertexId, VertexId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub length: Length,
    pub index: EdgeIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    mode: LengthMode,
    /// vertex id -> terminal flag
    verts: BTreeMap<VertexId, bool>,
    /// normalized (u, v) with u < v
    edges: BTreeMap<(VertexId, VertexId), EdgeData>,
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    /// Build a graph on vertices `1..=n`. Parallel input edges collapse to
    /// the minimum length; the first occurrence of a pair fixes its index.
    pub fn build(
        n: u32,
        terminals: &BTreeSet<u32>,
        edges: &[(u32, u32, Length)],
        mode: LengthMode,
    ) -> Result<Graph> {
        let vertex_ids: Vec<u32> = (1..=n).collect();
        Self::build_with_vertices(&vertex_ids, terminals, edges, mode)
    }

    /// Build over an explicit vertex id set (ids need not be contiguous).
    pub fn build_with_vertices(
        vertex_ids: &[u32],
        terminals: &BTreeSet<u32>,
        edges: &[(u32, u32, Length)],
        mode: LengthMode,
    ) -> Result<Graph> {
        let mut verts = BTreeMap::new();
        for &id in vertex_ids {
            if id == 0 {
                return Err(Error::IdOutOfRange(0, vertex_ids.len() as u32));
            }
            if verts.insert(VertexId(id), false).is_some() {
                return Err(Error::BadParameter(format!("duplicate vertex id {}", id)));
            }
        }
        for &t in terminals {
            match verts.get_mut(&VertexId(t)) {
                Some(flag) => *flag = true,
                None => return Err(Error::TerminalNotVertex(VertexId(t))),
            }
        }
        let mut g = Graph {
            mode,
            verts,
            edges: BTreeMap::new(),
            adj: BTreeMap::new(),
        };
        for k in g.verts.keys() {
            g.adj.insert(*k, BTreeSet::new());
        }
        let max_id = vertex_ids.iter().copied().max().unwrap_or(0);
        let mut next_index = 1u32;
        for &(u, v, ref len) in edges {
            if u == 0 || !g.verts.contains_key(&VertexId(u)) {
                return Err(Error::IdOutOfRange(u, max_id));
            }
            if v == 0 || !g.verts.contains_key(&VertexId(v)) {
                return Err(Error::IdOutOfRange(v, max_id));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if len.mode() != mode {
                return Err(Error::ModeMismatch);
            }
            if !len.is_valid() {
                return Err(Error::BadLength);
            }
            let key = norm_pair(VertexId(u), VertexId(v));
            match g.edges.get_mut(&key) {
                Some(data) => {
                    // parallel input: collapse to min length, keep first index
                    if *len < data.length {
                        data.length = len.clone();
                    }
                }
                None => {
                    g.edges.insert(
                        key,
                        EdgeData {
                            length: len.clone(),
                            index: EdgeIndex(next_index),
                        },
                    );
                    next_index += 1;
                    g.adj.get_mut(&key.0).unwrap().insert(key.1);
                    g.adj.get_mut(&key.1).unwrap().insert(key.0);
                }
            }
        }
        Ok(g)
    }

    pub fn mode(&self) -> LengthMode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.verts.contains_key(&v)
    }

    pub fn is_terminal(&self, v: VertexId) -> bool {
        self.verts.get(&v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.keys().copied()
    }

    pub fn terminals(&self) -> BTreeSet<VertexId> {
        self.verts
            .iter()
            .filter(|(_, &flag)| flag)
            .map(|(&v, _)| v)
            .collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flatten().copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn edge(&self, u: VertexId, v: VertexId) -> Option<&EdgeData> {
        self.edges.get(&norm_pair(u, v))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.contains_key(&norm_pair(u, v))
    }

    /// Edges as (u, v, data) with u < v, in key order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId, &EdgeData)> + '_ {
        self.edges.iter().map(|(&(u, v), d)| (u, v, d))
    }

    /// Edges sorted by stable index.
    pub fn edges_by_index(&self) -> Vec<(VertexId, VertexId, &EdgeData)> {
        let mut es: Vec<_> = self.edges().collect();
        es.sort_by_key(|(_, _, d)| d.index);
        es
    }

    /// Induced subgraph on `keep`, preserving flags, lengths, and indices.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> Graph {
        let mut verts = BTreeMap::new();
        let mut adj = BTreeMap::new();
        for &v in keep {
            if let Some(&flag) = self.verts.get(&v) {
                verts.insert(v, flag);
                adj.insert(v, BTreeSet::new());
            }
        }
        let mut edges = BTreeMap::new();
        for (&(u, v), data) in &self.edges {
            if verts.contains_key(&u) && verts.contains_key(&v) {
                edges.insert((u, v), data.clone());
                adj.get_mut(&u).unwrap().insert(v);
                adj.get_mut(&v).unwrap().insert(u);
            }
        }
        Graph {
            mode: self.mode,
            verts,
            edges,
            adj,
        }
    }

    fn remove_edge_internal(&mut self, u: VertexId, v: VertexId) {
        let key = norm_pair(u, v);
        self.edges.remove(&key);
        if let Some(s) = self.adj.get_mut(&key.0) {
            s.remove(&key.1);
        }
        if let Some(s) = self.adj.get_mut(&key.1) {
            s.remove(&key.0);
        }
    }

    /// Insert or min-merge an edge slot: minimum length and minimum index are
    /// taken independently, mirroring parallel-edge collapse under contraction.
    fn merge_edge_internal(&mut self, u: VertexId, v: VertexId, length: Length, index: EdgeIndex) {
        let key = norm_pair(u, v);
        match self.edges.get_mut(&key) {
            Some(data) => {
                if length < data.length {
                    data.length = length;
                }
                if index < data.index {
                    data.index = index;
                }
            }
            None => {
                self.edges.insert(key, EdgeData { length, index });
                self.adj.get_mut(&key.0).unwrap().insert(key.1);
                self.adj.get_mut(&key.1).unwrap().insert(key.0);
            }
        }
    }

    pub(crate) fn apply_in_place(&mut self, op: &MinorOp) -> Result<()> {
        match *op {
            MinorOp::DeleteVertex(v) => {
                match self.verts.get(&v) {
                    None => return Err(Error::UnknownVertex(v)),
                    Some(true) => return Err(Error::DeleteTerminal(v)),
                    Some(false) => {}
                }
                let nbrs: Vec<VertexId> = self.neighbors(v).collect();
                for w in nbrs {
                    self.remove_edge_internal(v, w);
                }
                self.verts.remove(&v);
                self.adj.remove(&v);
            }
            MinorOp::DeleteEdge(u, v) => {
                if !self.has_edge(u, v) {
                    return Err(Error::UnknownEdge(u, v));
                }
                self.remove_edge_internal(u, v);
            }
            MinorOp::ContractEdge { u, v, survivor } => {
                if !self.has_vertex(u) {
                    return Err(Error::UnknownVertex(u));
                }
                if !self.has_vertex(v) {
                    return Err(Error::UnknownVertex(v));
                }
                let edge = self
                    .edge(u, v)
                    .cloned()
                    .ok_or(Error::UnknownEdge(u, v))?;
                let (tu, tv) = (self.is_terminal(u), self.is_terminal(v));
                if tu && tv {
                    return Err(Error::ContractTerminalPair(u, v));
                }
                if survivor != u && survivor != v {
                    return Err(Error::BadSurvivor { u, v, survivor });
                }
                // the terminal endpoint, when present, must survive
                if (tu && survivor != u) || (tv && survivor != v) {
                    return Err(Error::BadSurvivor { u, v, survivor });
                }
                let absorbed = if survivor == u { v } else { u };
                self.remove_edge_internal(u, v);
                // Re-attach the absorbed endpoint's edges to the survivor.
                // The attachment point moves across the contracted edge, so
                // each re-attached edge picks up its length; parallel edges
                // collapse to minimum length and minimum index.
                let moved: Vec<(VertexId, EdgeData)> = self
                    .neighbors(absorbed)
                    .collect::<Vec<_>>()
                    .into_iter()
                    .map(|w| (w, self.edge(absorbed, w).unwrap().clone()))
                    .collect();
                for (w, data) in moved {
                    self.remove_edge_internal(absorbed, w);
                    debug_assert_ne!(w, survivor, "parallel edge should not exist");
                    let new_len = &data.length + &edge.length;
                    self.merge_edge_internal(survivor, w, new_len, data.index);
                }
                let absorbed_flag = self.verts.remove(&absorbed).unwrap();
                self.adj.remove(&absorbed);
                if absorbed_flag {
                    *self.verts.get_mut(&survivor).unwrap() = true;
                }
            }
        }
        Ok(())
    }

    /// Apply a single minor operation, returning the new graph.
    pub fn apply_minor_op(&self, op: &MinorOp) -> Result<Graph> {
        let mut g = self.clone();
        g.apply_in_place(op)?;
        Ok(g)
    }

    /// Union per the divide-and-conquer combination rule: vertex sets and
    /// edge sets unite, an edge present on both sides takes the minimum
    /// length (and minimum index). Terminal flags must agree on shared
    /// vertices and both operands must share a length mode.
    pub fn union(&self, other: &Graph) -> Result<Graph> {
        if self.mode != other.mode {
            return Err(Error::ModeMismatch);
        }
        let mut g = self.clone();
        for (&v, &flag) in &other.verts {
            match g.verts.get(&v) {
                Some(&f) if f != flag => return Err(Error::TerminalFlagConflict(v)),
                Some(_) => {}
                None => {
                    g.verts.insert(v, flag);
                    g.adj.insert(v, BTreeSet::new());
                }
            }
        }
        for (&(u, v), data) in &other.edges {
            g.merge_edge_internal(u, v, data.length.clone(), data.index);
        }
        Ok(g)
    }

    /// Re-number edge indices densely (1..=m) preserving relative order.
    /// The relative order is the semantic content of indices; this is the
    /// normal form used when graphs cross a file boundary.
    pub fn reindexed_dense(&self) -> Graph {
        let mut g = self.clone();
        let order = self.edges_by_index();
        let ranks: BTreeMap<(VertexId, VertexId), u32> = order
            .iter()
            .enumerate()
            .map(|(i, (u, v, _))| ((*u, *v), i as u32 + 1))
            .collect();
        for (key, data) in g.edges.iter_mut() {
            data.index = EdgeIndex(ranks[key]);
        }
        g
    }

    /// FNV-1a hash over a canonical serialization: mode, sorted vertices with
    /// flags, and edges in index order (ranks, not raw index values, so that
    /// a graph and its dense re-indexing share a fingerprint).
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf29ce484222325;
        const PRIME: u64 = 0x100000001b3;
        let mut h = OFFSET;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(PRIME);
            }
        };
        eat(match self.mode {
            LengthMode::Exact => b"X",
            LengthMode::Approx => b"A",
        });
        for (v, flag) in &self.verts {
            eat(&v.0.to_le_bytes());
            eat(&[*flag as u8]);
        }
        for (u, v, data) in self.edges_by_index() {
            eat(&u.0.to_le_bytes());
            eat(&v.0.to_le_bytes());
            match &data.length {
                Length::Exact(r) => {
                    eat(b"r");
                    eat(r.numer().to_string().as_bytes());
                    eat(b"/");
                    eat(r.denom().to_string().as_bytes());
                }
                Length::Approx(x) => {
                    eat(b"f");
                    eat(&x.to_bits().to_le_bytes());
                }
            }
        }
        h
    }
}
