//! Tree decompositions: validation, restriction to subgraphs, and a
//! min-fill elimination heuristic.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

/// Bags plus a tree over bag indices. Width is max bag size minus one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<VertexId>>,
    /// undirected tree edges over bag indices (0-based)
    pub tree: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    VertexUncovered(VertexId),
    EdgeUncovered(VertexId, VertexId),
    OccurrenceDisconnected(VertexId),
    NotATree,
    UnknownBagVertex(VertexId),
    BadBagIndex(usize),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::VertexUncovered(v) => write!(f, "vertex {} appears in no bag", v),
            TdViolation::EdgeUncovered(u, v) => {
                write!(f, "no bag contains both endpoints of edge ({}, {})", u, v)
            }
            TdViolation::OccurrenceDisconnected(v) => {
                write!(f, "bags containing vertex {} do not induce a subtree", v)
            }
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::UnknownBagVertex(v) => {
                write!(f, "bag mentions vertex {} absent from the graph", v)
            }
            TdViolation::BadBagIndex(i) => write!(f, "tree edge references bag {}", i),
        }
    }
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0)
    }

    fn bag_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Check the three decomposition axioms against `g`, reporting the first
    /// violation found. Also checks that the bag graph is a tree.
    pub fn validate(&self, g: &Graph) -> std::result::Result<(), TdViolation> {
        for &(a, b) in &self.tree {
            if a >= self.bags.len() {
                return Err(TdViolation::BadBagIndex(a));
            }
            if b >= self.bags.len() {
                return Err(TdViolation::BadBagIndex(b));
            }
        }
        for bag in &self.bags {
            for &v in bag {
                if !g.has_vertex(v) {
                    return Err(TdViolation::UnknownBagVertex(v));
                }
            }
        }
        // tree shape: connected with exactly bags-1 edges
        if !self.bags.is_empty() {
            if self.tree.len() != self.bags.len() - 1 {
                return Err(TdViolation::NotATree);
            }
            let adj = self.bag_adjacency();
            let mut seen = vec![false; self.bags.len()];
            let mut queue = VecDeque::from([0usize]);
            seen[0] = true;
            let mut count = 1;
            while let Some(b) = queue.pop_front() {
                for &c in &adj[b] {
                    if !seen[c] {
                        seen[c] = true;
                        count += 1;
                        queue.push_back(c);
                    }
                }
            }
            if count != self.bags.len() {
                return Err(TdViolation::NotATree);
            }
        }
        let mut occurrence: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                occurrence.entry(v).or_default().push(i);
            }
        }
        for v in g.vertices() {
            if !occurrence.contains_key(&v) {
                return Err(TdViolation::VertexUncovered(v));
            }
        }
        for (u, v, _) in g.edges() {
            let covered = self.bags.iter().any(|b| b.contains(&u) && b.contains(&v));
            if !covered {
                return Err(TdViolation::EdgeUncovered(u, v));
            }
        }
        // connectivity of each occurrence set within the bag tree
        let adj = self.bag_adjacency();
        for (v, bags_of_v) in occurrence {
            let inset: BTreeSet<usize> = bags_of_v.iter().copied().collect();
            let start = bags_of_v[0];
            let mut seen = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(b) = queue.pop_front() {
                for &c in &adj[b] {
                    if inset.contains(&c) && seen.insert(c) {
                        queue.push_back(c);
                    }
                }
            }
            if seen.len() != inset.len() {
                return Err(TdViolation::OccurrenceDisconnected(v));
            }
        }
        Ok(())
    }

    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        self.validate(g).map_err(Error::InvalidTreeDecomposition)
    }

    /// Restrict every bag to `keep`, preserving the tree shape. Validity and
    /// width are preserved for the induced subgraph on `keep`.
    pub fn restrict(&self, keep: &BTreeSet<VertexId>) -> TreeDecomposition {
        TreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|b| b.intersection(keep).copied().collect())
                .collect(),
            tree: self.tree.clone(),
        }
    }
}

/// Min-fill elimination ordering with min-degree then min-id tie-breaks.
/// The resulting width is an upper bound on the treewidth. Disconnected
/// graphs get the per-component bag trees chained together.
pub fn heuristic_tree_decomposition(g: &Graph) -> TreeDecomposition {
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).collect()))
        .collect();
    let mut bags: Vec<BTreeSet<VertexId>> = Vec::new();
    let mut elim_step: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut bag_of_step: Vec<usize> = Vec::new(); // elimination step -> bag id

    let fill_count = |adj: &BTreeMap<VertexId, BTreeSet<VertexId>>, v: VertexId| -> usize {
        let nbrs: Vec<VertexId> = adj[&v].iter().copied().collect();
        let mut fill = 0;
        for i in 0..nbrs.len() {
            for j in i + 1..nbrs.len() {
                if !adj[&nbrs[i]].contains(&nbrs[j]) {
                    fill += 1;
                }
            }
        }
        fill
    };

    let mut tree: Vec<(usize, usize)> = Vec::new();
    let mut pending: Vec<(VertexId, BTreeSet<VertexId>, usize)> = Vec::new(); // (v, bag, step)

    let mut step = 0usize;
    while !adj.is_empty() {
        let v = adj
            .keys()
            .copied()
            .min_by_key(|&v| (fill_count(&adj, v), adj[&v].len(), v))
            .unwrap();
        let nbrs: BTreeSet<VertexId> = adj[&v].clone();
        let mut bag = nbrs.clone();
        bag.insert(v);
        // make the neighborhood a clique, then remove v
        let nlist: Vec<VertexId> = nbrs.iter().copied().collect();
        for i in 0..nlist.len() {
            for j in i + 1..nlist.len() {
                let (a, b) = (nlist[i], nlist[j]);
                adj.get_mut(&a).unwrap().insert(b);
                adj.get_mut(&b).unwrap().insert(a);
            }
        }
        for &w in &nlist {
            adj.get_mut(&w).unwrap().remove(&v);
        }
        adj.remove(&v);
        elim_step.insert(v, step);
        pending.push((v, bag, step));
        step += 1;
    }

    // bag of step t connects to the bag of the earliest-eliminated member of
    // its neighborhood (all of which are eliminated later); the last vertex
    // of a component has an empty neighborhood and roots that component
    let mut roots: Vec<usize> = Vec::new();
    for (_, bag, s) in &pending {
        bags.push(bag.clone());
        bag_of_step.push(*s);
        debug_assert_eq!(bags.len() - 1, *s);
    }
    for (v, bag, s) in &pending {
        let succ = bag
            .iter()
            .filter(|&&w| w != *v)
            .map(|&w| elim_step[&w])
            .min();
        match succ {
            Some(next_step) => tree.push((*s, next_step)),
            None => roots.push(*s),
        }
    }
    // chain component roots so the bag graph is a single tree
    for w in roots.windows(2) {
        tree.push((w[0], w[1]));
    }

    let td = TreeDecomposition { bags, tree };
    prune_subset_bags(td)
}

/// Remove bags that are subsets of a neighboring bag, contracting the tree
/// edge between them. Standard cleanup after elimination.
fn prune_subset_bags(mut td: TreeDecomposition) -> TreeDecomposition {
    loop {
        let n = td.bags.len();
        if n <= 1 {
            return td;
        }
        let mut target: Option<(usize, usize)> = None;
        'outer: for &(a, b) in &td.tree {
            if td.bags[a].is_subset(&td.bags[b]) {
                target = Some((a, b));
                break 'outer;
            }
            if td.bags[b].is_subset(&td.bags[a]) {
                target = Some((b, a));
                break 'outer;
            }
        }
        let Some((dead, into)) = target else {
            return td;
        };
        let mut new_tree = Vec::new();
        for &(a, b) in &td.tree {
            let (a, b) = (
                if a == dead { into } else { a },
                if b == dead { into } else { b },
            );
            if a != b {
                new_tree.push((a, b));
            }
        }
        // reindex: drop `dead`
        let remap = |i: usize| if i > dead { i - 1 } else { i };
        td.bags.remove(dead);
        td.tree = new_tree
            .into_iter()
            .map(|(a, b)| (remap(a), remap(b)))
            .collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::length::{Length, LengthMode};

    fn unit() -> Length {
        Length::from_int(1)
    }

    fn path_graph(n: u32) -> Graph {
        let es: Vec<(u32, u32, Length)> = (1..n).map(|i| (i, i + 1, unit())).collect();
        Graph::build(n, &BTreeSet::new(), &es, LengthMode::Exact).unwrap()
    }

    fn grid_graph(k: u32) -> Graph {
        let id = |x: u32, y: u32| x * k + y + 1;
        let mut es = Vec::new();
        for x in 0..k {
            for y in 0..k {
                if x + 1 < k {
                    es.push((id(x, y), id(x + 1, y), unit()));
                }
                if y + 1 < k {
                    es.push((id(x, y), id(x, y + 1), unit()));
                }
            }
        }
        Graph::build(k * k, &BTreeSet::new(), &es, LengthMode::Exact).unwrap()
    }

    #[test]
    fn path_has_width_one_with_edge_bags() {
        let g = path_graph(9);
        let td = heuristic_tree_decomposition(&g);
        assert_eq!(td.width(), 1);
        td.validate(&g).unwrap();
        for bag in &td.bags {
            assert_eq!(bag.len(), 2);
            let v: Vec<u32> = bag.iter().map(|x| x.0).collect();
            assert_eq!(v[1], v[0] + 1);
        }
    }

    #[test]
    fn tree_has_width_one() {
        // star plus a pendant path
        let g = Graph::build(
            6,
            &BTreeSet::new(),
            &[
                (1, 2, unit()),
                (1, 3, unit()),
                (1, 4, unit()),
                (4, 5, unit()),
                (5, 6, unit()),
            ],
            LengthMode::Exact,
        )
        .unwrap();
        let td = heuristic_tree_decomposition(&g);
        assert_eq!(td.width(), 1);
        td.validate(&g).unwrap();
    }

    #[test]
    fn four_by_four_grid_width_is_four() {
        let g = grid_graph(4);
        let td = heuristic_tree_decomposition(&g);
        td.validate(&g).unwrap();
        // treewidth of the 4x4 grid is 4, so a valid decomposition cannot
        // do better; the heuristic should not do worse either
        assert_eq!(td.width(), 4);
    }

    #[test]
    fn disconnected_graph_gets_one_tree() {
        let g = Graph::build(
            4,
            &BTreeSet::new(),
            &[(1, 2, unit()), (3, 4, unit())],
            LengthMode::Exact,
        )
        .unwrap();
        let td = heuristic_tree_decomposition(&g);
        td.validate(&g).unwrap();
    }

    #[test]
    fn validate_rejects_uncovered_edge() {
        let g = path_graph(3);
        let td = TreeDecomposition {
            bags: vec![
                [VertexId(1), VertexId(2)].into_iter().collect(),
                [VertexId(3)].into_iter().collect(),
            ],
            tree: vec![(0, 1)],
        };
        assert_eq!(
            td.validate(&g),
            Err(TdViolation::EdgeUncovered(VertexId(2), VertexId(3)))
        );
    }

    #[test]
    fn validate_rejects_disconnected_occurrence() {
        let g = path_graph(3);
        let td = TreeDecomposition {
            bags: vec![
                [VertexId(1), VertexId(2)].into_iter().collect(),
                [VertexId(2), VertexId(3)].into_iter().collect(),
                [VertexId(1)].into_iter().collect(),
            ],
            tree: vec![(0, 1), (1, 2)],
        };
        assert_eq!(
            td.validate(&g),
            Err(TdViolation::OccurrenceDisconnected(VertexId(1)))
        );
    }

    #[test]
    fn validate_accepts_path_decomposition() {
        let g = path_graph(4);
        let td = TreeDecomposition {
            bags: (1..4u32)
                .map(|i| [VertexId(i), VertexId(i + 1)].into_iter().collect())
                .collect(),
            tree: vec![(0, 1), (1, 2)],
        };
        td.validate(&g).unwrap();
        assert_eq!(td.width(), 1);
    }
}
