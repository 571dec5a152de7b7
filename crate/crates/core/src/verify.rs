//! Ground-truth verification: distance preservation, domination, witness
//! replay, and size-bound reports.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::length::{Length, LengthMode};
use crate::path::apsp;
use crate::witness::{replay_witness, Witness};
use std::collections::BTreeMap;
use std::fmt;

/// Relative tolerance for approximate-mode comparisons.
pub const APPROX_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum PairVerdict {
    Equal,
    BothAbsent,
    Violated {
        original: Option<Length>,
        reduced: Option<Length>,
    },
}

impl PairVerdict {
    pub fn pass(&self) -> bool {
        !matches!(self, PairVerdict::Violated { .. })
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub pairs: Vec<((VertexId, VertexId), PairVerdict)>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.pairs.iter().all(|(_, v)| v.pass())
    }

    pub fn violations(&self) -> impl Iterator<Item = &((VertexId, VertexId), PairVerdict)> {
        self.pairs.iter().filter(|(_, v)| !v.pass())
    }
}

fn lengths_match(mode: LengthMode, a: &Length, b: &Length) -> bool {
    match mode {
        LengthMode::Exact => a == b,
        LengthMode::Approx => {
            let (x, y) = (a.to_f64(), b.to_f64());
            (x - y).abs() <= APPROX_REL_TOL * x.abs().max(y.abs()).max(1e-300)
        }
    }
}

/// Check that every terminal-pair distance is identical in `g` and `gp`:
/// exact equality in exact mode, relative tolerance 1e-9 in approximate
/// mode, and absent must stay absent.
pub fn verify_distance_preserving(
    g: &Graph,
    gp: &Graph,
    r: &[VertexId],
) -> Result<VerificationReport> {
    if g.mode() != gp.mode() {
        return Err(Error::ModeMismatch);
    }
    for &t in r {
        if !g.has_vertex(t) {
            return Err(Error::UnknownVertex(t));
        }
        if !gp.has_vertex(t) {
            return Err(Error::TerminalNotVertex(t));
        }
    }
    let before = apsp(g, r)?;
    let after = apsp(gp, r)?;
    let mut pairs = Vec::new();
    for (u, v) in before.pairs() {
        let verdict = match (before.get(u, v), after.get(u, v)) {
            (None, None) => PairVerdict::BothAbsent,
            (Some(a), Some(b)) if lengths_match(g.mode(), a, b) => PairVerdict::Equal,
            (a, b) => PairVerdict::Violated {
                original: a.cloned(),
                reduced: b.cloned(),
            },
        };
        pairs.push(((u, v), verdict));
    }
    Ok(VerificationReport { pairs })
}

#[derive(Debug, Clone)]
pub enum DominationVerdict {
    Holds { pairs_checked: usize },
    Violated {
        u: VertexId,
        v: VertexId,
        original: Length,
        reduced: Option<Length>,
    },
}

impl DominationVerdict {
    pub fn pass(&self) -> bool {
        matches!(self, DominationVerdict::Holds { .. })
    }
}

/// Check that reduced distances dominate the originals over every pair of
/// surviving vertices: d_reduced(u, v) >= d_original(map u, map v), with
/// "disconnected" treated as infinite.
pub fn verify_domination(
    g: &Graph,
    gp: &Graph,
    map: &BTreeMap<VertexId, VertexId>,
) -> Result<DominationVerdict> {
    let mut seen = std::collections::BTreeSet::new();
    for (&from, &to) in map {
        if !gp.has_vertex(from) {
            return Err(Error::UnknownVertex(from));
        }
        if !g.has_vertex(to) {
            return Err(Error::UnknownVertex(to));
        }
        if !seen.insert(to) {
            return Err(Error::BadParameter(format!(
                "vertex map is not injective at {}",
                to
            )));
        }
    }
    let survivors: Vec<VertexId> = gp.vertices().collect();
    for &v in &survivors {
        if !map.contains_key(&v) {
            return Err(Error::BadParameter(format!(
                "vertex map misses surviving vertex {}",
                v
            )));
        }
    }
    let originals: Vec<VertexId> = survivors.iter().map(|v| map[v]).collect();
    let after = apsp(gp, &survivors)?;
    let before = apsp(g, &originals)?;
    let mut checked = 0;
    for i in 0..survivors.len() {
        for j in i + 1..survivors.len() {
            let (u, v) = (survivors[i], survivors[j]);
            let orig = before.get(map[&u], map[&v]);
            let red = after.get(u, v);
            checked += 1;
            match (orig, red) {
                (None, _) => {} // infinite dominates everything... and nothing exceeds it
                (Some(_), None) => {} // infinite dominates a finite original
                (Some(a), Some(b)) => {
                    let ok = match g.mode() {
                        LengthMode::Exact => b >= a,
                        LengthMode::Approx => {
                            b.to_f64() >= a.to_f64() * (1.0 - APPROX_REL_TOL)
                        }
                    };
                    if !ok {
                        return Ok(DominationVerdict::Violated {
                            u,
                            v,
                            original: a.clone(),
                            reduced: Some(b.clone()),
                        });
                    }
                }
            }
        }
    }
    Ok(DominationVerdict::Holds {
        pairs_checked: checked,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReplayVerdict {
    Match,
    Mismatch(String),
}

impl ReplayVerdict {
    pub fn pass(&self) -> bool {
        matches!(self, ReplayVerdict::Match)
    }
}

/// Replay the witness on `g` and compare the result with `gp` field for
/// field (ids, flags, lengths, indices).
pub fn verify_witness_replay(g: &Graph, w: &Witness, gp: &Graph) -> Result<ReplayVerdict> {
    let replayed = replay_witness(g, w)?;
    Ok(compare_graphs(&replayed, gp))
}

fn compare_graphs(a: &Graph, b: &Graph) -> ReplayVerdict {
    if a == b {
        return ReplayVerdict::Match;
    }
    // narrate the first difference found
    let av: Vec<VertexId> = a.vertices().collect();
    let bv: Vec<VertexId> = b.vertices().collect();
    if av != bv {
        return ReplayVerdict::Mismatch("vertex sets differ".into());
    }
    for v in av {
        if a.is_terminal(v) != b.is_terminal(v) {
            return ReplayVerdict::Mismatch(format!("terminal flag differs at {}", v));
        }
    }
    for (u, v, d) in a.edges() {
        match b.edge(u, v) {
            None => {
                return ReplayVerdict::Mismatch(format!("edge ({}, {}) missing", u, v));
            }
            Some(e) => {
                if e.length != d.length {
                    return ReplayVerdict::Mismatch(format!(
                        "edge ({}, {}) length {} vs {}",
                        u, v, d.length, e.length
                    ));
                }
                if e.index != d.index {
                    return ReplayVerdict::Mismatch(format!(
                        "edge ({}, {}) index {} vs {}",
                        u, v, d.index, e.index
                    ));
                }
            }
        }
    }
    ReplayVerdict::Mismatch("edge sets differ".into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeFamily {
    Tree,
    General,
    Tw(usize),
}

#[derive(Debug, Clone)]
pub struct SizeReport {
    pub family: SizeFamily,
    pub k: usize,
    pub v_out: usize,
    pub e_out: usize,
    pub v_bound: Option<usize>,
    pub e_bound: Option<usize>,
    /// |V'| / (q^3 k), recorded for scaling analysis in the tw family
    pub ratio: Option<f64>,
    pub pass: bool,
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|V'|={} |E'|={}", self.v_out, self.e_out)?;
        if let Some(b) = self.v_bound {
            write!(f, " v-bound={}", b)?;
        }
        if let Some(b) = self.e_bound {
            write!(f, " e-bound={}", b)?;
        }
        if let Some(r) = self.ratio {
            write!(f, " ratio={:.4}", r)?;
        }
        write!(f, " {}", if self.pass { "ok" } else { "FAIL" })
    }
}

/// Desk-scale forms of the size bounds: trees get |V'| <= 2k - 2, general
/// graphs |V'| <= k + k^4 and |E'| <= k^4 + k^2, and the treewidth family
/// records |V'| / (q^3 k) without asserting a constant.
pub fn size_bound_report(gp: &Graph, family: SizeFamily, k: usize) -> SizeReport {
    let v_out = gp.vertex_count();
    let e_out = gp.edge_count();
    match family {
        SizeFamily::Tree => {
            let bound = if k >= 2 { Some(2 * k - 2) } else { None };
            SizeReport {
                family,
                k,
                v_out,
                e_out,
                v_bound: bound,
                e_bound: None,
                ratio: None,
                pass: bound.is_none_or(|b| v_out <= b),
            }
        }
        SizeFamily::General => {
            let k4 = k.pow(4);
            let vb = k + k4;
            let eb = k4 + k * k;
            SizeReport {
                family,
                k,
                v_out,
                e_out,
                v_bound: Some(vb),
                e_bound: Some(eb),
                ratio: None,
                pass: v_out <= vb && e_out <= eb,
            }
        }
        SizeFamily::Tw(q) => {
            let denom = (q.pow(3) * k) as f64;
            SizeReport {
                family,
                k,
                v_out,
                e_out,
                v_bound: None,
                e_bound: None,
                ratio: Some(v_out as f64 / denom),
                pass: true,
            }
        }
    }
}
