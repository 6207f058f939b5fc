//! Lazy presentations of locally finite infinite graphs.
//!
//! A family is given by a deterministic, symmetric neighbor oracle over
//! canonically encoded vertex ids:
//!
//! * `path`    — integers, `"-2"`, `"0"`, `"17"`;
//! * `grid2d`  — integer pairs, `"x,y"`;
//! * `tree:d`  — the d-regular tree; words starting at the root `"r"`,
//!   children append a digit (`"r0"`, `"r01"`, ...);
//! * `ladder`  — the doubly infinite ladder; `"i,s"` with side `s` in {0,1}.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DegreeTag, FiniteGraph, VertexId};

/// Hard cap on ball size so a bad radius on the CLI cannot exhaust memory.
pub const MAX_BALL_MEMBERS: usize = 1_000_000;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Path,
    Grid2d,
    RegularTree(u32),
    Ladder,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path => write!(f, "path"),
            Family::Grid2d => write!(f, "grid2d"),
            Family::RegularTree(d) => write!(f, "tree:{d}"),
            Family::Ladder => write!(f, "ladder"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Family::Path),
            "grid2d" => Ok(Family::Grid2d),
            "ladder" => Ok(Family::Ladder),
            _ => {
                if let Some(d) = s.strip_prefix("tree:") {
                    let d: u32 = d
                        .parse()
                        .map_err(|_| Error::UnknownFamily(s.to_string()))?;
                    if (2..=9).contains(&d) {
                        return Ok(Family::RegularTree(d));
                    }
                }
                Err(Error::UnknownFamily(s.to_string()))
            }
        }
    }
}

/// Structured form of a vertex id, used for validation and neighbor order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Coord {
    Int(i64),
    Pair(i64, i64),
    Word(String),
}

impl Coord {
    fn encode(&self) -> VertexId {
        match self {
            Coord::Int(n) => VertexId::new(n.to_string()),
            Coord::Pair(x, y) => VertexId::new(format!("{x},{y}")),
            Coord::Word(w) => VertexId::new(w.clone()),
        }
    }
}

/// A presented graph: a family together with its neighbor oracle.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PresentedGraph {
    family: Family,
}

/// Ball `B(v, r)`: all vertices at oracle distance at most `r` from `v`,
/// in BFS discovery order, together with the induced subgraph.
#[derive(Clone, Debug)]
pub struct Ball {
    pub center: VertexId,
    pub radius: u32,
    pub members: Vec<VertexId>,
    pub graph: FiniteGraph,
    distances: BTreeMap<VertexId, u32>,
}

impl Ball {
    /// Oracle distance from the center, for members only.
    pub fn distance(&self, v: &VertexId) -> Option<u32> {
        self.distances.get(v).copied()
    }

    /// Members at distance at most `d` from the center.
    pub fn members_within(&self, d: u32) -> Vec<VertexId> {
        self.members
            .iter()
            .filter(|v| self.distances[*v] <= d)
            .cloned()
            .collect()
    }
}

impl PresentedGraph {
    pub fn new(family: Family) -> Self {
        PresentedGraph { family }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Canonical center used when the caller does not pick one.
    pub fn origin(&self) -> VertexId {
        match self.family {
            Family::Path => VertexId::new("0"),
            Family::Grid2d | Family::Ladder => VertexId::new("0,0"),
            Family::RegularTree(_) => VertexId::new("r"),
        }
    }

    /// Parses and validates a vertex id for this family.
    pub fn parse_vertex(&self, s: &str) -> Result<VertexId> {
        self.decode(s).map(|c| c.encode())
    }

    fn malformed(&self, id: &str, reason: &str) -> Error {
        Error::MalformedVertexId {
            family: self.family.to_string(),
            id: id.to_string(),
            reason: reason.to_string(),
        }
    }

    fn decode(&self, s: &str) -> Result<Coord> {
        match self.family {
            Family::Path => {
                let n: i64 = s
                    .parse()
                    .map_err(|_| self.malformed(s, "expected an integer"))?;
                if n.to_string() != s {
                    return Err(self.malformed(s, "not in canonical integer form"));
                }
                Ok(Coord::Int(n))
            }
            Family::Grid2d => {
                let (x, y) = parse_pair(s).ok_or_else(|| self.malformed(s, "expected x,y"))?;
                Ok(Coord::Pair(x, y))
            }
            Family::Ladder => {
                let (i, side) =
                    parse_pair(s).ok_or_else(|| self.malformed(s, "expected i,s"))?;
                if side != 0 && side != 1 {
                    return Err(self.malformed(s, "side must be 0 or 1"));
                }
                Ok(Coord::Pair(i, side))
            }
            Family::RegularTree(d) => {
                let Some(word) = s.strip_prefix('r') else {
                    return Err(self.malformed(s, "expected a word starting with r"));
                };
                for (i, ch) in word.chars().enumerate() {
                    let Some(digit) = ch.to_digit(10) else {
                        return Err(self.malformed(s, "expected digits after r"));
                    };
                    // The root has d children; every other vertex has d-1.
                    let limit = if i == 0 { d } else { d - 1 };
                    if digit >= limit {
                        return Err(self.malformed(s, "digit out of range for this family"));
                    }
                }
                Ok(Coord::Word(s.to_string()))
            }
        }
    }

    /// The oracle: the finite, sorted neighbor list of `v`.
    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        let coord = self.decode(v.as_str())?;
        let mut out: Vec<Coord> = Vec::new();
        match (self.family, &coord) {
            (Family::Path, Coord::Int(n)) => {
                let lo = n
                    .checked_sub(1)
                    .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                let hi = n
                    .checked_add(1)
                    .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                out.push(Coord::Int(lo));
                out.push(Coord::Int(hi));
            }
            (Family::Grid2d, Coord::Pair(x, y)) => {
                for (dx, dy) in [(-1, 0), (1, 0), (0, -1), (0, 1)] {
                    let nx = x
                        .checked_add(dx)
                        .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                    let ny = y
                        .checked_add(dy)
                        .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                    out.push(Coord::Pair(nx, ny));
                }
            }
            (Family::Ladder, Coord::Pair(i, side)) => {
                let lo = i
                    .checked_sub(1)
                    .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                let hi = i
                    .checked_add(1)
                    .ok_or_else(|| self.malformed(v.as_str(), "coordinate overflow"))?;
                out.push(Coord::Pair(lo, *side));
                out.push(Coord::Pair(hi, *side));
                out.push(Coord::Pair(*i, 1 - side));
            }
            (Family::RegularTree(d), Coord::Word(w)) => {
                if w.len() > 1 {
                    out.push(Coord::Word(w[..w.len() - 1].to_string()));
                }
                let child_count = if w.len() == 1 { *d } else { *d - 1 };
                for c in 0..child_count {
                    out.push(Coord::Word(format!("{w}{c}")));
                }
            }
            _ => unreachable!("decode returned a coord of the wrong shape"),
        }
        out.sort();
        Ok(out.into_iter().map(|c| c.encode()).collect())
    }

    /// BFS closure to depth `r` with the induced subgraph. Members carry tag
    /// `Finite`; presented families are locally finite.
    pub fn ball(&self, center: &VertexId, radius: u32) -> Result<Ball> {
        let center = self.parse_vertex(center.as_str())?;
        let mut distances: BTreeMap<VertexId, u32> = BTreeMap::new();
        let mut order: Vec<VertexId> = Vec::new();
        let mut seen: HashSet<VertexId> = HashSet::new();
        let mut queue: VecDeque<(VertexId, u32)> = VecDeque::new();
        seen.insert(center.clone());
        queue.push_back((center.clone(), 0));
        while let Some((v, d)) = queue.pop_front() {
            distances.insert(v.clone(), d);
            order.push(v.clone());
            if order.len() > MAX_BALL_MEMBERS {
                return Err(Error::BallTooLarge {
                    center,
                    radius,
                    limit: MAX_BALL_MEMBERS,
                });
            }
            if d == radius {
                continue;
            }
            for u in self.neighbors(&v)? {
                if seen.insert(u.clone()) {
                    queue.push_back((u, d + 1));
                }
            }
        }
        let mut edges = Vec::new();
        for v in &order {
            for u in self.neighbors(v)? {
                if v < &u && distances.contains_key(&u) {
                    edges.push((v.clone(), u));
                }
            }
        }
        let graph = FiniteGraph::new(
            order.iter().map(|v| (v.clone(), DegreeTag::Finite)),
            edges,
        )?;
        Ok(Ball {
            center,
            radius,
            members: order,
            graph,
            distances,
        })
    }
}

fn parse_pair(s: &str) -> Option<(i64, i64)> {
    let (a, b) = s.split_once(',')?;
    let x: i64 = a.parse().ok()?;
    let y: i64 = b.parse().ok()?;
    if a != x.to_string() || b != y.to_string() {
        return None;
    }
    Some((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn vid(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn family_parsing() {
        assert_eq!("path".parse::<Family>().unwrap(), Family::Path);
        assert_eq!("tree:3".parse::<Family>().unwrap(), Family::RegularTree(3));
        assert!("tree:1".parse::<Family>().is_err());
        assert!("tree:99".parse::<Family>().is_err());
        assert!("cube".parse::<Family>().is_err());
    }

    #[test]
    fn path_ball_radius_two() {
        let p = PresentedGraph::new(Family::Path);
        let b = p.ball(&vid("0"), 2).unwrap();
        let mut members = b.members.clone();
        members.sort();
        let mut expected = vec![vid("-2"), vid("-1"), vid("0"), vid("1"), vid("2")];
        expected.sort();
        assert_eq!(members, expected);
        assert_eq!(b.graph.edge_count(), 4);
    }

    #[test]
    fn grid_ball_radius_one_is_star() {
        let p = PresentedGraph::new(Family::Grid2d);
        let b = p.ball(&vid("0,0"), 1).unwrap();
        assert_eq!(b.members.len(), 5);
        assert_eq!(b.graph.edge_count(), 4);
    }

    #[test]
    fn tree_ball_counts_match_branching() {
        // oracle BFS count cross-checked against 1 + d + d(d-1) by per-layer
        // enumeration
        let p = PresentedGraph::new(Family::RegularTree(3));
        let b = p.ball(&vid("r"), 2).unwrap();
        assert_eq!(b.members.len(), 10);
        let d = 3usize;
        assert_eq!(b.members.len(), 1 + d + d * (d - 1));
        let layer2 = b
            .members
            .iter()
            .filter(|v| b.distance(v) == Some(2))
            .count();
        assert_eq!(layer2, d * (d - 1));
    }

    #[test]
    fn ladder_ball_shape() {
        let p = PresentedGraph::new(Family::Ladder);
        let b = p.ball(&vid("0,0"), 2).unwrap();
        // rail -2..2 on side 0, rail -1..1 on side 1
        assert_eq!(b.members.len(), 8);
        assert_eq!(b.graph.edge_count(), 9);
    }

    #[test]
    fn malformed_ids_are_rejected() {
        let cases = [
            (Family::Path, "1.5"),
            (Family::Path, "01"),
            (Family::Path, "+1"),
            (Family::Grid2d, "1"),
            (Family::Grid2d, "1,a"),
            (Family::Ladder, "1,2"),
            (Family::RegularTree(3), "x"),
            (Family::RegularTree(3), "r3"),
            (Family::RegularTree(3), "r02"), // non-root child digit must be < d-1
        ];
        for (fam, id) in cases {
            let p = PresentedGraph::new(fam);
            assert!(p.parse_vertex(id).is_err(), "{fam} should reject {id:?}");
        }
    }

    #[test]
    fn canonical_ids_round_trip() {
        for fam in [
            Family::Path,
            Family::Grid2d,
            Family::RegularTree(4),
            Family::Ladder,
        ] {
            let p = PresentedGraph::new(fam);
            let b = p.ball(&p.origin(), 3).unwrap();
            for v in &b.members {
                assert_eq!(p.parse_vertex(v.as_str()).unwrap(), *v);
            }
        }
    }

    fn sample_vertices(p: &PresentedGraph, count: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
        // random walks from the origin reach a spread of ids
        let mut out = Vec::new();
        let mut v = p.origin();
        for _ in 0..count {
            let nbrs = p.neighbors(&v).unwrap();
            v = nbrs[rng.gen_range(0..nbrs.len())].clone();
            out.push(v.clone());
        }
        out
    }

    #[test]
    fn oracle_symmetry_on_sampled_vertices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for fam in [
            Family::Path,
            Family::Grid2d,
            Family::RegularTree(3),
            Family::Ladder,
        ] {
            let p = PresentedGraph::new(fam);
            for v in sample_vertices(&p, 1000, &mut rng) {
                for u in p.neighbors(&v).unwrap() {
                    let back = p.neighbors(&u).unwrap();
                    assert!(back.contains(&v), "{fam}: {u} misses {v}");
                }
            }
        }
    }

    #[test]
    fn ball_nesting_and_interior_completeness() {
        for fam in [
            Family::Path,
            Family::Grid2d,
            Family::RegularTree(3),
            Family::Ladder,
        ] {
            let p = PresentedGraph::new(fam);
            for r in 1..=3u32 {
                let inner = p.ball(&p.origin(), r).unwrap();
                let outer = p.ball(&p.origin(), r + 1).unwrap();
                for v in &inner.members {
                    assert!(outer.distance(v).is_some());
                }
                // induced graphs agree on the smaller member set
                let set: std::collections::BTreeSet<_> =
                    inner.members.iter().cloned().collect();
                let restricted = outer.graph.induced_subgraph(&set).unwrap();
                assert_eq!(restricted, inner.graph);
                // interior vertices have their full oracle neighborhood inside
                for z in inner.members_within(r - 1) {
                    let inside = inner.graph.neighbors(&z).unwrap().to_vec();
                    let oracle = p.neighbors(&z).unwrap();
                    assert_eq!(inside, oracle);
                }
            }
        }
    }

    #[test]
    fn bfs_order_is_stable() {
        let p = PresentedGraph::new(Family::Grid2d);
        let a = p.ball(&vid("0,0"), 3).unwrap();
        let b = p.ball(&vid("0,0"), 3).unwrap();
        assert_eq!(a.members, b.members);
    }
}
