//! Random line-arrangement instances in the unit square.
//!
//! Terminals sit at random rational points on the four sides; every
//! top-bottom and every left-right terminal pair is joined by a straight
//! segment. Intersection points are computed with exact rational
//! coordinates, then all sub-segment lengths are emitted as Euclidean
//! doubles. Degenerate configurations (three concurrent segments, endpoint
//! touches, coincident points) retry with a derived seed; random
//! coordinates on a 2^20 grid make that vanishingly rare.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::length::{Length, LengthMode};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

const COORD_DENOM: u32 = 1 << 20;
const MAX_ATTEMPTS: u32 = 32;

type Point = (BigRational, BigRational);

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    TopBottom,
    LeftRight,
}

struct Segment {
    a: Point,
    b: Point,
    family: Family,
    /// terminal ids of the endpoints (a, b)
    ends: (u32, u32),
}

/// A generated arrangement instance. `cross_vertices` are the intersections
/// between a top-bottom and a left-right segment; within-family crossings
/// are kept as vertices too when they occur.
#[derive(Debug, Clone)]
pub struct Arrangement {
    pub graph: Graph,
    pub terminals: BTreeSet<VertexId>,
    pub cross_vertices: BTreeSet<VertexId>,
    pub within_vertices: BTreeSet<VertexId>,
    /// Euclidean coordinates of every vertex
    pub coords: BTreeMap<VertexId, (f64, f64)>,
    /// the seed that produced a non-degenerate instance
    pub seed_used: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// `count` distinct abscissae strictly inside (0, 1), as rationals over 2^20.
fn side_points(rng: &mut ChaCha8Rng, count: usize) -> Vec<BigRational> {
    let mut nums: BTreeSet<u32> = BTreeSet::new();
    while nums.len() < count {
        nums.insert(rng.gen_range(1..COORD_DENOM));
    }
    nums.into_iter()
        .map(|n| rat(n as i64, COORD_DENOM as i64))
        .collect()
}

fn cross(ax: &BigRational, ay: &BigRational, bx: &BigRational, by: &BigRational) -> BigRational {
    ax * by - ay * bx
}

enum Isect {
    None,
    Degenerate,
    /// proper interior crossing at the point, with parameter t along the
    /// first segment
    Proper(Point, BigRational),
}

fn intersect(s1: &Segment, s2: &Segment) -> Isect {
    // segments sharing a terminal endpoint meet there and nowhere else
    // unless collinear, which is degenerate
    let d1 = (&s1.b.0 - &s1.a.0, &s1.b.1 - &s1.a.1);
    let d2 = (&s2.b.0 - &s2.a.0, &s2.b.1 - &s2.a.1);
    let denom = cross(&d1.0, &d1.1, &d2.0, &d2.1);
    let shares_endpoint =
        s1.ends.0 == s2.ends.0 || s1.ends.0 == s2.ends.1 || s1.ends.1 == s2.ends.0
            || s1.ends.1 == s2.ends.1;
    if denom.is_zero() {
        // parallel; collinear overlap would need four collinear boundary
        // points
        let w = (&s2.a.0 - &s1.a.0, &s2.a.1 - &s1.a.1);
        if cross(&d1.0, &d1.1, &w.0, &w.1).is_zero() {
            return Isect::Degenerate;
        }
        return Isect::None;
    }
    let w = (&s2.a.0 - &s1.a.0, &s2.a.1 - &s1.a.1);
    let t = cross(&w.0, &w.1, &d2.0, &d2.1) / denom.clone();
    let s = cross(&w.0, &w.1, &d1.0, &d1.1) / denom;
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    if t < zero || t > one || s < zero || s > one {
        return Isect::None;
    }
    let t_interior = t > zero && t < one;
    let s_interior = s > zero && s < one;
    if t_interior && s_interior {
        let px = &s1.a.0 + &(&d1.0 * &t);
        let py = &s1.a.1 + &(&d1.1 * &t);
        return Isect::Proper((px, py), t);
    }
    if shares_endpoint {
        return Isect::None; // the common terminal, already a vertex
    }
    Isect::Degenerate // an endpoint lies on the other segment
}

fn euclid(a: &Point, b: &Point) -> f64 {
    let dx = (&a.0 - &b.0).to_f64().unwrap();
    let dy = (&a.1 - &b.1).to_f64().unwrap();
    dx.hypot(dy)
}

/// Build the arrangement for one seed, or report degeneracy.
fn try_build(k: u32, seed: u64) -> Result<Option<Arrangement>> {
    let per_side = (k / 4) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = side_points(&mut rng, per_side);
    let bottom = side_points(&mut rng, per_side);
    let left = side_points(&mut rng, per_side);
    let right = side_points(&mut rng, per_side);

    let one = || BigRational::from_integer(1.into());
    let zero = || BigRational::zero();

    // terminal ids 1.. in side order: top (by x), bottom, left (by y), right
    let mut terminal_points: Vec<Point> = Vec::new();
    for x in &top {
        terminal_points.push((x.clone(), one()));
    }
    for x in &bottom {
        terminal_points.push((x.clone(), zero()));
    }
    for y in &left {
        terminal_points.push((zero(), y.clone()));
    }
    for y in &right {
        terminal_points.push((one(), y.clone()));
    }
    let tid = |side: usize, i: usize| (side * per_side + i) as u32 + 1;

    let mut segments: Vec<Segment> = Vec::new();
    for (i, x_t) in top.iter().enumerate() {
        for (j, x_b) in bottom.iter().enumerate() {
            segments.push(Segment {
                a: (x_t.clone(), one()),
                b: (x_b.clone(), zero()),
                family: Family::TopBottom,
                ends: (tid(0, i), tid(1, j)),
            });
        }
    }
    for (i, y_l) in left.iter().enumerate() {
        for (j, y_r) in right.iter().enumerate() {
            segments.push(Segment {
                a: (zero(), y_l.clone()),
                b: (one(), y_r.clone()),
                family: Family::LeftRight,
                ends: (tid(2, i), tid(3, j)),
            });
        }
    }

    // all pairwise proper intersections, with concurrency detection
    let mut point_ids: BTreeMap<Point, u32> = BTreeMap::new();
    let mut cross_ids: BTreeSet<u32> = BTreeSet::new();
    let mut within_ids: BTreeSet<u32> = BTreeSet::new();
    let mut on_segment: Vec<Vec<(BigRational, u32)>> = (0..segments.len())
        .map(|_| Vec::new())
        .collect();
    let mut next_id = (4 * per_side) as u32 + 1;
    for i in 0..segments.len() {
        for j in i + 1..segments.len() {
            match intersect(&segments[i], &segments[j]) {
                Isect::None => {}
                Isect::Degenerate => return Ok(None),
                Isect::Proper(p, t_i) => {
                    if point_ids.contains_key(&p) {
                        // a third segment through an existing crossing
                        return Ok(None);
                    }
                    let id = next_id;
                    next_id += 1;
                    point_ids.insert(p.clone(), id);
                    if segments[i].family != segments[j].family {
                        cross_ids.insert(id);
                    } else {
                        within_ids.insert(id);
                    }
                    on_segment[i].push((t_i, id));
                    // parameter along segment j
                    let d2 = (&segments[j].b.0 - &segments[j].a.0, &segments[j].b.1 - &segments[j].a.1);
                    let t_j = if d2.0.is_zero() {
                        (&p.1 - &segments[j].a.1) / d2.1
                    } else {
                        (&p.0 - &segments[j].a.0) / d2.0
                    };
                    on_segment[j].push((t_j, id));
                }
            }
        }
    }

    // vertices: terminals then interior points by id; build sub-segment edges
    let mut coords: BTreeMap<u32, Point> = BTreeMap::new();
    for (i, p) in terminal_points.iter().enumerate() {
        coords.insert(i as u32 + 1, p.clone());
    }
    for (p, id) in &point_ids {
        coords.insert(*id, p.clone());
    }
    let mut edges: Vec<(u32, u32, Length)> = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        let mut stops: Vec<(BigRational, u32)> = Vec::new();
        stops.push((BigRational::zero(), seg.ends.0));
        stops.push((BigRational::from_integer(1.into()), seg.ends.1));
        stops.extend(on_segment[i].iter().cloned());
        stops.sort_by(|a, b| a.0.cmp(&b.0));
        for w in stops.windows(2) {
            let (u, v) = (w[0].1, w[1].1);
            let len = euclid(&coords[&u], &coords[&v]);
            if len == 0.0 {
                return Ok(None); // coincident stops
            }
            edges.push((u, v, Length::approx(len)?));
        }
    }

    let n = next_id - 1;
    let terminal_ids: BTreeSet<u32> = (1..=(4 * per_side) as u32).collect();
    let graph = Graph::build(n, &terminal_ids, &edges, LengthMode::Approx)?;
    let coords_f64: BTreeMap<VertexId, (f64, f64)> = coords
        .iter()
        .map(|(&id, p)| {
            (
                VertexId(id),
                (p.0.to_f64().unwrap(), p.1.to_f64().unwrap()),
            )
        })
        .collect();
    Ok(Some(Arrangement {
        graph,
        terminals: terminal_ids.into_iter().map(VertexId).collect(),
        cross_vertices: cross_ids.into_iter().map(VertexId).collect(),
        within_vertices: within_ids.into_iter().map(VertexId).collect(),
        coords: coords_f64,
        seed_used: seed,
    }))
}

/// Generate a line-arrangement instance with 4*floor(k/4) terminals.
/// Deterministic in (k, seed); degenerate draws regenerate with a derived
/// seed.
pub fn gen_line_arrangement(k: u32, seed: u64) -> Result<Arrangement> {
    if k < 8 {
        return Err(Error::BadParameter(
            "arrangement needs k >= 8 (two points per side)".into(),
        ));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let derived = if attempt == 0 {
            seed
        } else {
            splitmix64(seed.wrapping_add(attempt as u64))
        };
        if let Some(arr) = try_build(k, derived)? {
            return Ok(arr);
        }
    }
    Err(Error::DegenerateArrangement(MAX_ATTEMPTS))
}
