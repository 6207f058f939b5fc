//! Finite simple graphs with per-vertex degree tags.
//!
//! A vertex tagged `Infinite(rank)` stands for a vertex whose true degree is
//! an infinite cardinal; the represented neighbor set is a finite truncation
//! and the tag, not the represented degree, is authoritative.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier; ordered and compared by its canonical text form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

/// Degree tag: `Finite`, or `Infinite(rank)` where the rank is only a
/// total-order token for a cardinal (rank 0 for the smallest, then up).
/// `Finite` compares below every `Infinite`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum DegreeTag {
    Finite,
    Infinite(u32),
}

impl DegreeTag {
    pub fn is_infinite(&self) -> bool {
        matches!(self, DegreeTag::Infinite(_))
    }
}

/// Undirected edge, normalized so that `u() <= v()`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    /// Builds a normalized edge. Panics on loops; construction sites must
    /// reject loops first (see [`FiniteGraph::new`]).
    pub fn new(a: VertexId, b: VertexId) -> Self {
        assert!(a != b, "loop edge {a}");
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn u(&self) -> &VertexId {
        &self.0
    }

    pub fn v(&self) -> &VertexId {
        &self.1
    }

    /// The endpoint opposite to `x`, if `x` is an endpoint.
    pub fn other(&self, x: &VertexId) -> Option<&VertexId> {
        if &self.0 == x {
            Some(&self.1)
        } else if &self.1 == x {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Simple undirected graph with degree tags. Immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    tags: BTreeMap<VertexId, DegreeTag>,
    adjacency: BTreeMap<VertexId, Vec<VertexId>>,
    edges: BTreeSet<Edge>,
}

impl FiniteGraph {
    /// Builds a graph from explicit vertices and edges. Loops are rejected,
    /// duplicate edges collapse, and every endpoint must be declared.
    pub fn new(
        vertices: impl IntoIterator<Item = (VertexId, DegreeTag)>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut tags = BTreeMap::new();
        for (v, tag) in vertices {
            tags.insert(v, tag);
        }
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            if !tags.contains_key(&a) {
                return Err(Error::UndeclaredEndpoint(a));
            }
            if !tags.contains_key(&b) {
                return Err(Error::UndeclaredEndpoint(b));
            }
            edge_set.insert(Edge::new(a, b));
        }
        let mut adjacency: BTreeMap<VertexId, Vec<VertexId>> =
            tags.keys().map(|v| (v.clone(), Vec::new())).collect();
        for e in &edge_set {
            adjacency.get_mut(e.u()).unwrap().push(e.v().clone());
            adjacency.get_mut(e.v()).unwrap().push(e.u().clone());
        }
        for nbrs in adjacency.values_mut() {
            nbrs.sort();
        }
        Ok(FiniteGraph {
            tags,
            adjacency,
            edges: edge_set,
        })
    }

    /// Builds a graph from an edge list. Vertices mentioned only in `tags`
    /// become isolated vertices; untagged vertices get `Finite`.
    pub fn from_edge_list(
        pairs: impl IntoIterator<Item = (VertexId, VertexId)>,
        tags: Option<&BTreeMap<VertexId, DegreeTag>>,
    ) -> Result<Self> {
        let pairs: Vec<(VertexId, VertexId)> = pairs.into_iter().collect();
        let mut vertices: BTreeMap<VertexId, DegreeTag> = BTreeMap::new();
        if let Some(tags) = tags {
            for (v, t) in tags {
                vertices.insert(v.clone(), *t);
            }
        }
        for (a, b) in &pairs {
            vertices.entry(a.clone()).or_insert(DegreeTag::Finite);
            vertices.entry(b.clone()).or_insert(DegreeTag::Finite);
        }
        FiniteGraph::new(vertices, pairs)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.tags.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.tags.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn contains_vertex(&self, v: &VertexId) -> bool {
        self.tags.contains_key(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn tag(&self, v: &VertexId) -> Result<DegreeTag> {
        self.tags
            .get(v)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    pub fn tag_map(&self) -> &BTreeMap<VertexId, DegreeTag> {
        &self.tags
    }

    /// Sorted represented neighbors of `v`.
    pub fn neighbors(&self, v: &VertexId) -> Result<&[VertexId]> {
        self.adjacency
            .get(v)
            .map(|n| n.as_slice())
            .ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    /// Represented degree (the truncation's degree, not the tag).
    pub fn degree(&self, v: &VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// Connected components as induced subgraphs, ordered by their smallest
    /// vertex id.
    pub fn components(&self) -> Vec<FiniteGraph> {
        let mut seen: BTreeSet<VertexId> = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.tags.keys() {
            if seen.contains(start) {
                continue;
            }
            let mut members = BTreeSet::new();
            let mut queue = VecDeque::new();
            members.insert(start.clone());
            queue.push_back(start.clone());
            while let Some(v) = queue.pop_front() {
                for u in &self.adjacency[&v] {
                    if members.insert(u.clone()) {
                        queue.push_back(u.clone());
                    }
                }
            }
            seen.extend(members.iter().cloned());
            out.push(self.induced_subgraph(&members).expect("members are vertices"));
        }
        out
    }

    /// Induced subgraph on `members`: their tags, plus every edge with both
    /// endpoints inside.
    pub fn induced_subgraph(&self, members: &BTreeSet<VertexId>) -> Result<FiniteGraph> {
        for v in members {
            if !self.tags.contains_key(v) {
                return Err(Error::NotASubset(v.clone()));
            }
        }
        let vertices = members
            .iter()
            .map(|v| (v.clone(), self.tags[v]))
            .collect::<Vec<_>>();
        let edges = self
            .edges
            .iter()
            .filter(|e| members.contains(e.u()) && members.contains(e.v()))
            .map(|e| (e.u().clone(), e.v().clone()))
            .collect::<Vec<_>>();
        FiniteGraph::new(vertices, edges)
    }

    /// True iff this (connected) graph is an isolated edge: two vertices, one
    /// edge, both tags `Finite`. A K2 with an infinite endpoint is not an
    /// obstruction; its infinite side resolves validity.
    pub fn is_isolated_edge_component(&self) -> bool {
        self.tags.len() == 2
            && self.edges.len() == 1
            && self.tags.values().all(|t| *t == DegreeTag::Finite)
    }
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGraph({} vertices, {} edges)",
            self.tags.len(),
            self.edges.len()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vid(s: &str) -> VertexId {
        VertexId::from(s)
    }

    #[test]
    fn from_edge_list_builds_path() {
        let g = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("b"), vid("c"))],
            None,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.tag(&vid("a")).unwrap(), DegreeTag::Finite);
    }

    #[test]
    fn from_edge_list_collapses_duplicates() {
        let g = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("a"), vid("b")), (vid("b"), vid("a"))],
            None,
        )
        .unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn from_edge_list_rejects_loop() {
        let err = FiniteGraph::from_edge_list([(vid("a"), vid("a"))], None).unwrap_err();
        assert!(matches!(err, Error::LoopEdge(_)));
    }

    #[test]
    fn components_of_path_is_single() {
        let g = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("b"), vid("c"))],
            None,
        )
        .unwrap();
        assert_eq!(g.components().len(), 1);
    }

    #[test]
    fn components_of_two_edges() {
        let g = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("c"), vid("d"))],
            None,
        )
        .unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.vertex_count() == 2 && c.edge_count() == 1));
        // ordered by smallest vertex id
        assert!(comps[0].contains_vertex(&vid("a")));
    }

    #[test]
    fn components_of_empty_graph() {
        let g = FiniteGraph::new([], []).unwrap();
        assert!(g.components().is_empty());
    }

    #[test]
    fn components_partition_vertices() {
        let g = FiniteGraph::from_edge_list(
            [
                (vid("a"), vid("b")),
                (vid("b"), vid("c")),
                (vid("x"), vid("y")),
            ],
            Some(&BTreeMap::from([(vid("z"), DegreeTag::Finite)])),
        )
        .unwrap();
        let comps = g.components();
        let mut all: Vec<&VertexId> = comps.iter().flat_map(|c| c.vertices()).collect();
        all.sort();
        let expected: Vec<&VertexId> = g.vertices().collect();
        assert_eq!(all, expected);
        let total: usize = comps.iter().map(|c| c.vertex_count()).sum();
        assert_eq!(total, g.vertex_count());
    }

    #[test]
    fn isolated_edge_detection() {
        let k2 = FiniteGraph::from_edge_list([(vid("a"), vid("b"))], None).unwrap();
        assert!(k2.is_isolated_edge_component());

        let tagged = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b"))],
            Some(&BTreeMap::from([(vid("a"), DegreeTag::Infinite(0))])),
        )
        .unwrap();
        assert!(!tagged.is_isolated_edge_component());

        let p3 = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("b"), vid("c"))],
            None,
        )
        .unwrap();
        assert!(!p3.is_isolated_edge_component());
    }

    #[test]
    fn induced_subgraph_on_triangle() {
        let k3 = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("b"), vid("c")), (vid("a"), vid("c"))],
            None,
        )
        .unwrap();
        let s = BTreeSet::from([vid("a"), vid("b")]);
        let h = k3.induced_subgraph(&s).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn induced_subgraph_identity() {
        let g = FiniteGraph::from_edge_list(
            [(vid("a"), vid("b")), (vid("b"), vid("c"))],
            None,
        )
        .unwrap();
        let s: BTreeSet<VertexId> = g.vertices().cloned().collect();
        assert_eq!(g.induced_subgraph(&s).unwrap(), g);
    }

    #[test]
    fn induced_subgraph_of_cycle_is_path() {
        let c4 = FiniteGraph::from_edge_list(
            [
                (vid("v1"), vid("v2")),
                (vid("v2"), vid("v3")),
                (vid("v3"), vid("v4")),
                (vid("v4"), vid("v1")),
            ],
            None,
        )
        .unwrap();
        let s = BTreeSet::from([vid("v1"), vid("v2"), vid("v3")]);
        let h = c4.induced_subgraph(&s).unwrap();
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edge_count(), 2);
        assert!(!h.is_isolated_edge_component());
    }

    #[test]
    fn induced_subgraph_rejects_foreign_vertices() {
        let g = FiniteGraph::from_edge_list([(vid("a"), vid("b"))], None).unwrap();
        let s = BTreeSet::from([vid("a"), vid("zz")]);
        assert!(matches!(g.induced_subgraph(&s), Err(Error::NotASubset(_))));
    }

    #[test]
    fn degree_tag_order() {
        assert!(DegreeTag::Finite < DegreeTag::Infinite(0));
        assert!(DegreeTag::Infinite(0) < DegreeTag::Infinite(1));
        assert_eq!(DegreeTag::Infinite(2), DegreeTag::Infinite(2));
    }

    #[test]
    fn edge_normalizes_endpoints() {
        let e = Edge::new(vid("b"), vid("a"));
        assert_eq!(e.u(), &vid("a"));
        assert_eq!(e.v(), &vid("b"));
        assert_eq!(e.other(&vid("a")), Some(&vid("b")));
        assert_eq!(e.other(&vid("c")), None);
    }
}
