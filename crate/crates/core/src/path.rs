//! Canonical shortest paths and all-pairs terminal distances.
//!
//! Ties between equal-length paths are broken by an exact perturbation: each
//! path carries the formal sum of 2^(-index(e)) over its edges, compared as a
//! binary fraction. Distinct paths have distinct edge sets, hence distinct
//! keys, so the minimum of (length, key) is a unique path; uniqueness makes
//! the selection subpath-consistent.

use crate::error::{Error, Result};
use crate::graph::{EdgeIndex, Graph, VertexId};
use crate::length::Length;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

/// The formal sum of 2^(-i) over a set of edge indices, kept as the sorted
/// index list and compared exactly as a binary fraction: the first index in
/// the symmetric difference decides, and the side holding it is larger.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationKey(Vec<EdgeIndex>);

impl PerturbationKey {
    pub fn empty() -> Self {
        PerturbationKey(Vec::new())
    }

    /// Key for an explicit edge set.
    pub fn from_indices(mut indices: Vec<EdgeIndex>) -> Self {
        indices.sort();
        indices.dedup();
        PerturbationKey(indices)
    }

    pub fn indices(&self) -> &[EdgeIndex] {
        &self.0
    }

    /// Key of this path extended by one more edge.
    fn extended(&self, idx: EdgeIndex) -> Self {
        let mut v = self.0.clone();
        match v.binary_search(&idx) {
            Ok(_) => debug_assert!(false, "edge repeated on a path"),
            Err(pos) => v.insert(pos, idx),
        }
        PerturbationKey(v)
    }
}

impl PartialOrd for PerturbationKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PerturbationKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.0.iter();
        let mut b = other.0.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // extra indices are extra positive bits
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    // the smaller index is the first differing bit; the
                    // side that has it set is the larger fraction
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

/// The canonical shortest path between two vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathResult {
    pub total: Length,
    pub vertices: Vec<VertexId>,
    pub key: PerturbationKey,
}

impl PathResult {
    /// Edges of the path as normalized pairs, in traversal order.
    pub fn edge_pairs(&self) -> Vec<(VertexId, VertexId)> {
        self.vertices
            .windows(2)
            .map(|w| crate::graph::norm_pair(w[0], w[1]))
            .collect()
    }
}

/// Shortest-path tree from one source under the perturbed order.
pub struct CanonicalSpt {
    pub source: VertexId,
    pub dist: BTreeMap<VertexId, (Length, PerturbationKey)>,
    parent: BTreeMap<VertexId, VertexId>,
}

impl CanonicalSpt {
    pub fn path_to(&self, target: VertexId) -> Option<PathResult> {
        let (total, key) = self.dist.get(&target)?.clone();
        let mut vertices = vec![target];
        let mut cur = target;
        while cur != self.source {
            cur = *self.parent.get(&cur)?;
            vertices.push(cur);
        }
        vertices.reverse();
        Some(PathResult {
            total,
            vertices,
            key,
        })
    }
}

struct HeapEntry {
    dist: (Length, PerturbationKey),
    vertex: VertexId,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

/// Dijkstra over (length, perturbation key) pairs. Edge weights are strictly
/// positive in the perturbed order (every key bit is positive even when the
/// length is zero), so settled distances are final and optimal paths simple.
pub fn canonical_spt(g: &Graph, source: VertexId) -> Result<CanonicalSpt> {
    if !g.has_vertex(source) {
        return Err(Error::UnknownVertex(source));
    }
    let mut dist: BTreeMap<VertexId, (Length, PerturbationKey)> = BTreeMap::new();
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut settled: BTreeMap<VertexId, bool> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    dist.insert(source, (Length::zero(g.mode()), PerturbationKey::empty()));
    heap.push(HeapEntry {
        dist: dist[&source].clone(),
        vertex: source,
    });
    while let Some(HeapEntry { dist: d, vertex: u }) = heap.pop() {
        if settled.get(&u).copied().unwrap_or(false) {
            continue;
        }
        if dist[&u] != d {
            continue; // stale entry
        }
        settled.insert(u, true);
        for w in g.neighbors(u).collect::<Vec<_>>() {
            if settled.get(&w).copied().unwrap_or(false) {
                continue;
            }
            let data = g.edge(u, w).unwrap();
            let cand = (&d.0 + &data.length, d.1.extended(data.index));
            let better = match dist.get(&w) {
                None => true,
                Some(cur) => cand < *cur,
            };
            if better {
                dist.insert(w, cand.clone());
                parent.insert(w, u);
                heap.push(HeapEntry {
                    dist: cand,
                    vertex: w,
                });
            }
        }
    }
    Ok(CanonicalSpt {
        source,
        dist,
        parent,
    })
}

/// The unique canonical shortest path between `u` and `v`, or `None` when
/// they are disconnected. The choice is symmetric in its endpoints and every
/// subpath of a canonical path is the canonical path between its endpoints.
pub fn canonical_shortest_path(g: &Graph, u: VertexId, v: VertexId) -> Result<Option<PathResult>> {
    if !g.has_vertex(u) {
        return Err(Error::UnknownVertex(u));
    }
    if !g.has_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    if u == v {
        return Ok(Some(PathResult {
            total: Length::zero(g.mode()),
            vertices: vec![u],
            key: PerturbationKey::empty(),
        }));
    }
    let spt = canonical_spt(g, u)?;
    Ok(spt.path_to(v))
}

/// Symmetric matrix of pairwise distances over an ordered vertex list.
/// Absent entries mark disconnected pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    vertices: Vec<VertexId>,
    pos: BTreeMap<VertexId, usize>,
    entries: Vec<Option<Length>>,
}

impl DistanceMatrix {
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn get(&self, u: VertexId, v: VertexId) -> Option<&Length> {
        let i = *self.pos.get(&u)?;
        let j = *self.pos.get(&v)?;
        self.entries[i * self.vertices.len() + j].as_ref()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.pos.contains_key(&v)
    }

    /// Unordered pairs (u, v) with u < v in vertex-list order.
    pub fn pairs(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        let vs = &self.vertices;
        (0..vs.len()).flat_map(move |i| (i + 1..vs.len()).map(move |j| (vs[i], vs[j])))
    }
}

/// Exact all-pairs distances among `sources`, computed by one canonical
/// Dijkstra per source. This is the brute-force oracle every verification
/// leans on.
pub fn apsp(g: &Graph, sources: &[VertexId]) -> Result<DistanceMatrix> {
    for &s in sources {
        if !g.has_vertex(s) {
            return Err(Error::UnknownVertex(s));
        }
    }
    let n = sources.len();
    let pos: BTreeMap<VertexId, usize> = sources.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut entries: Vec<Option<Length>> = vec![None; n * n];
    for (i, &s) in sources.iter().enumerate() {
        let spt = canonical_spt(g, s)?;
        for (j, &t) in sources.iter().enumerate() {
            entries[i * n + j] = spt.dist.get(&t).map(|(d, _)| d.clone());
        }
    }
    Ok(DistanceMatrix {
        vertices: sources.to_vec(),
        pos,
        entries,
    })
}
