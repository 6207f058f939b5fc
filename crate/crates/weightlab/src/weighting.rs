//! Weights, list assignments, weighted degrees and validity.
//!
//! The weighted degree of a vertex with an infinite degree tag is its tag:
//! no finite sum of weights can move it. Validity asks every edge to have
//! endpoints with different weighted degrees, except that an edge whose
//! endpoints share the same infinite rank is exempt.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{DegreeTag, Edge, FiniteGraph, VertexId};

/// Lists of allowed weights for every vertex and edge of a target graph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ListAssignment {
    vertex_lists: BTreeMap<VertexId, Vec<i64>>,
    edge_lists: BTreeMap<Edge, Vec<i64>>,
}

impl ListAssignment {
    /// Builds an assignment from explicit lists; every vertex and edge of
    /// `g` must get a nonempty list. Lists are sorted and deduplicated.
    pub fn from_lists(
        g: &FiniteGraph,
        vertex_lists: BTreeMap<VertexId, Vec<i64>>,
        edge_lists: BTreeMap<Edge, Vec<i64>>,
    ) -> Result<Self> {
        let mut vl = BTreeMap::new();
        for v in g.vertices() {
            let list = vertex_lists
                .get(v)
                .ok_or_else(|| Error::MissingList(format!("vertex {v}")))?;
            vl.insert(v.clone(), normalize(list, || format!("vertex {v}"))?);
        }
        let mut el = BTreeMap::new();
        for e in g.edges() {
            let list = edge_lists
                .get(e)
                .ok_or_else(|| Error::MissingList(format!("edge {e}")))?;
            el.insert(e.clone(), normalize(list, || format!("edge {e}"))?);
        }
        Ok(ListAssignment {
            vertex_lists: vl,
            edge_lists: el,
        })
    }

    /// Uniform lists: `list` for every edge, `{1}` for every vertex.
    pub fn edge_lists_uniform(g: &FiniteGraph, list: &[i64]) -> Result<Self> {
        Self::uniform(g, &[1], list)
    }

    /// The classic setup: edge lists `{1,2,3}`, vertex lists `{1}`.
    pub fn edge123(g: &FiniteGraph) -> Self {
        Self::edge_lists_uniform(g, &[1, 2, 3]).expect("static lists are nonempty")
    }

    /// Edge lists `{1..k}`, vertex lists `{1}`.
    pub fn edge_k(g: &FiniteGraph, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::BadListParameter("edgeK needs k >= 1".into()));
        }
        let edge: Vec<i64> = (1..=i64::from(k)).collect();
        Self::uniform(g, &[1], &edge)
    }

    /// Vertex lists `{1..a}`, edge lists `{1..b}`.
    pub fn total(g: &FiniteGraph, a: u32, b: u32) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::BadListParameter("total needs a,b >= 1".into()));
        }
        let vertex: Vec<i64> = (1..=i64::from(a)).collect();
        let edge: Vec<i64> = (1..=i64::from(b)).collect();
        Self::uniform(g, &vertex, &edge)
    }

    fn uniform(g: &FiniteGraph, vertex: &[i64], edge: &[i64]) -> Result<Self> {
        let vl = g
            .vertices()
            .map(|v| (v.clone(), vertex.to_vec()))
            .collect();
        let el = g.edges().map(|e| (e.clone(), edge.to_vec())).collect();
        Self::from_lists(g, vl, el)
    }

    pub fn vertex_list(&self, v: &VertexId) -> Result<&[i64]> {
        self.vertex_lists
            .get(v)
            .map(|l| l.as_slice())
            .ok_or_else(|| Error::MissingList(format!("vertex {v}")))
    }

    pub fn edge_list(&self, e: &Edge) -> Result<&[i64]> {
        self.edge_lists
            .get(e)
            .map(|l| l.as_slice())
            .ok_or_else(|| Error::MissingList(format!("edge {e}")))
    }

    pub fn vertex_lists(&self) -> &BTreeMap<VertexId, Vec<i64>> {
        &self.vertex_lists
    }

    pub fn edge_lists(&self) -> &BTreeMap<Edge, Vec<i64>> {
        &self.edge_lists
    }

    /// Number of total assignments, saturating at `u128::MAX`.
    pub fn assignment_space(&self) -> u128 {
        let mut space: u128 = 1;
        for list in self.vertex_lists.values().chain(self.edge_lists.values()) {
            space = space.saturating_mul(list.len() as u128);
        }
        space
    }
}

fn normalize(list: &[i64], what: impl Fn() -> String) -> Result<Vec<i64>> {
    let mut l = list.to_vec();
    l.sort_unstable();
    l.dedup();
    if l.is_empty() {
        return Err(Error::EmptyList(what()));
    }
    Ok(l)
}

/// A total (or, during restriction and pinning, partial) assignment of
/// integer weights to vertices and edges.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Weighting {
    vertex_weights: BTreeMap<VertexId, i64>,
    edge_weights: BTreeMap<Edge, i64>,
}

impl Weighting {
    pub fn new(
        vertex_weights: BTreeMap<VertexId, i64>,
        edge_weights: BTreeMap<Edge, i64>,
    ) -> Self {
        Weighting {
            vertex_weights,
            edge_weights,
        }
    }

    pub fn vertex_weight(&self, v: &VertexId) -> Option<i64> {
        self.vertex_weights.get(v).copied()
    }

    pub fn edge_weight(&self, e: &Edge) -> Option<i64> {
        self.edge_weights.get(e).copied()
    }

    pub fn vertex_weights(&self) -> &BTreeMap<VertexId, i64> {
        &self.vertex_weights
    }

    pub fn edge_weights(&self) -> &BTreeMap<Edge, i64> {
        &self.edge_weights
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_weights.is_empty() && self.edge_weights.is_empty()
    }

    /// True iff every vertex and edge of `g` has a weight.
    pub fn is_total_on(&self, g: &FiniteGraph) -> bool {
        g.vertices().all(|v| self.vertex_weights.contains_key(v))
            && g.edges().all(|e| self.edge_weights.contains_key(e))
    }

    /// True iff every present weight belongs to its list.
    pub fn respects(&self, lists: &ListAssignment) -> bool {
        self.vertex_weights.iter().all(|(v, w)| {
            lists
                .vertex_list(v)
                .map(|l| l.contains(w))
                .unwrap_or(false)
        }) && self.edge_weights.iter().all(|(e, w)| {
            lists.edge_list(e).map(|l| l.contains(w)).unwrap_or(false)
        })
    }
}

/// Weighted degree of a vertex: totally ordered, with every finite sum
/// below every infinite rank.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum SumValue {
    Finite(i64),
    Infinite(u32),
}

/// Weighted degree of `v` under `w`: the tag's rank for an infinite-tagged
/// vertex, otherwise the sum of incident edge weights plus the vertex's own
/// weight.
pub fn weighted_degree(g: &FiniteGraph, w: &Weighting, v: &VertexId) -> Result<SumValue> {
    match g.tag(v)? {
        DegreeTag::Infinite(rank) => Ok(SumValue::Infinite(rank)),
        DegreeTag::Finite => {
            let own = w
                .vertex_weight(v)
                .ok_or_else(|| Error::MissingWeight(format!("vertex {v}")))?;
            let mut sum = own;
            for u in g.neighbors(v)? {
                let e = Edge::new(v.clone(), u.clone());
                sum += w
                    .edge_weight(&e)
                    .ok_or_else(|| Error::MissingWeight(format!("edge {e}")))?;
            }
            Ok(SumValue::Finite(sum))
        }
    }
}

/// Per-edge validity report. `violations` is sorted by edge id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<(Edge, SumValue)>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every edge of `g` under the total weighting `w`. An edge violates
/// iff both endpoint sums are finite and equal; endpoints sharing the same
/// infinite rank are exempt by definition.
pub fn validate(g: &FiniteGraph, w: &Weighting) -> Result<ValidityReport> {
    let mut sums: BTreeMap<&VertexId, SumValue> = BTreeMap::new();
    for v in g.vertices() {
        sums.insert(v, weighted_degree(g, w, v)?);
    }
    let mut violations = Vec::new();
    for e in g.edges() {
        let su = sums[e.u()];
        let sv = sums[e.v()];
        if let (SumValue::Finite(a), SumValue::Finite(b)) = (su, sv) {
            if a == b {
                violations.push((e.clone(), su));
            }
        }
    }
    Ok(ValidityReport { violations })
}

pub fn is_valid(g: &FiniteGraph, w: &Weighting) -> Result<bool> {
    Ok(validate(g, w)?.is_valid())
}

/// Pointwise restriction of `w` to the vertices and edges of `h`.
/// Validity is not preserved in general; boundary vertices lose addends.
pub fn restrict(w: &Weighting, h: &FiniteGraph) -> Result<Weighting> {
    let mut vw = BTreeMap::new();
    for v in h.vertices() {
        let value = w
            .vertex_weight(v)
            .ok_or_else(|| Error::RestrictOutsideDomain(format!("vertex {v}")))?;
        vw.insert(v.clone(), value);
    }
    let mut ew = BTreeMap::new();
    for e in h.edges() {
        let value = w
            .edge_weight(e)
            .ok_or_else(|| Error::RestrictOutsideDomain(format!("edge {e}")))?;
        ew.insert(e.clone(), value);
    }
    Ok(Weighting::new(vw, ew))
}
