//! Exact search for a valid list weighting, plus full enumeration as an
//! independent oracle.
//!
//! The solver is a deterministic backtracking search over edge and vertex
//! weights. Once every item incident to a finite-tagged vertex is forced,
//! its sum is final; an edge between two forced finite vertices with equal
//! sums triggers a backtrack. Edges with an infinite-tagged endpoint impose
//! no constraint of their own.

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{DegreeTag, Edge, FiniteGraph, VertexId};
use crate::weighting::{ListAssignment, Weighting};

/// Enumeration refuses to run over spaces larger than this without a limit.
pub const ENUMERATION_SPACE_BOUND: u128 = 100_000_000;

#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    /// Assignment attempts allowed before the search gives up.
    pub node_budget: u64,
    /// Optional seed shuffling per-item value order; `None` keeps values
    /// ascending. Used by portfolio runs.
    pub seed: Option<u64>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 10_000_000,
            seed: None,
        }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig {
            node_budget,
            ..SearchConfig::default()
        }
    }

    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed: Some(seed),
            ..SearchConfig::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Found(Weighting),
    Unsat,
    Aborted,
}

impl SolveOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SolveOutcome::Found(_))
    }
}

/// Outcome plus bookkeeping. `diagnostic` explains up-front refutations.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub outcome: SolveOutcome,
    pub nodes: u64,
    pub diagnostic: Option<String>,
}

/// Tri-state answer for [`solvable`]. Budget exhaustion is reported as
/// `Unknown`, never conflated with `Unsolvable`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solvability {
    Solvable,
    Unsolvable,
    Unknown,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Item {
    Vertex(usize),
    Edge(usize),
}

/// Graph, lists and pins compiled to index arrays for the search.
struct Compiled {
    vertices: Vec<VertexId>,
    edges: Vec<Edge>,
    finite: Vec<bool>,
    /// finite vertices adjacent through an edge, by vertex index
    finite_nbrs: Vec<Vec<usize>>,
    /// search order over undecided items
    order: Vec<Item>,
    /// per undecided item (aligned with `order`): candidate values
    domains: Vec<Vec<i64>>,
    /// per undecided item: finite vertices whose sum it feeds
    touches: Vec<[Option<usize>; 2]>,
    /// per undecided item: domain extremes
    dom_lo: Vec<i64>,
    dom_hi: Vec<i64>,
    /// items decided before the search (pins, singleton lists, free items)
    preassigned: Vec<(Item, i64)>,
    /// finite vertices × (sum of decided incident values, min/max over
    /// undecided incident values)
    init_sum: Vec<i64>,
    init_min_rem: Vec<i64>,
    init_max_rem: Vec<i64>,
    diagnostic: Option<String>,
    /// setup already refutes the instance (forced equal sums on an edge)
    refuted: bool,
}

fn compile(
    g: &FiniteGraph,
    lists: &ListAssignment,
    cfg: &SearchConfig,
    pinned: Option<&Weighting>,
) -> Result<Compiled> {
    let vertices: Vec<VertexId> = g.vertices().cloned().collect();
    let vidx: BTreeMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<Edge> = g.edges().cloned().collect();
    let eidx: BTreeMap<&Edge, usize> = edges.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let finite: Vec<bool> = vertices
        .iter()
        .map(|v| g.tag(v).map(|t| !t.is_infinite()))
        .collect::<Result<_>>()?;

    if let Some(pin) = pinned {
        for (v, &value) in pin.vertex_weights() {
            if !vidx.contains_key(v) {
                return Err(Error::PinnedItemUnknown(format!("vertex {v}")));
            }
            if !lists.vertex_list(v)?.contains(&value) {
                return Err(Error::PinnedValueOutsideList {
                    item: format!("vertex {v}"),
                    value,
                });
            }
        }
        for (e, &value) in pin.edge_weights() {
            if !eidx.contains_key(e) {
                return Err(Error::PinnedItemUnknown(format!("edge {e}")));
            }
            if !lists.edge_list(e)?.contains(&value) {
                return Err(Error::PinnedValueOutsideList {
                    item: format!("edge {e}"),
                    value,
                });
            }
        }
    }

    let mut finite_nbrs: Vec<Vec<usize>> = vec![Vec::new(); vertices.len()];
    for e in &edges {
        let u = vidx[e.u()];
        let v = vidx[e.v()];
        if finite[u] && finite[v] {
            finite_nbrs[u].push(v);
            finite_nbrs[v].push(u);
        }
    }

    // Dedicated diagnostic for the unavoidable obstruction: a K2 component
    // whose two finite endpoints carry equal singleton vertex lists.
    let mut diagnostic = None;
    for (ui, u) in vertices.iter().enumerate() {
        let nbrs = g.neighbors(u)?;
        if nbrs.len() != 1 {
            continue;
        }
        let w = &nbrs[0];
        if g.neighbors(w)?.len() != 1 || u >= w {
            continue;
        }
        let wi = vidx[w];
        if !(finite[ui] && finite[wi]) {
            continue;
        }
        let lu = lists.vertex_list(u)?;
        let lw = lists.vertex_list(w)?;
        if lu.len() == 1 && lw.len() == 1 && lu[0] == lw[0] {
            diagnostic = Some(format!(
                "isolated edge component {u}-{w}: endpoint sums are forced equal"
            ));
        }
    }

    // Value order: ascending, or shuffled per item under a portfolio seed.
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut arrange = |list: &[i64]| -> Vec<i64> {
        let mut d = list.to_vec();
        if let Some(rng) = rng.as_mut() {
            d.shuffle(rng);
        }
        d
    };

    // BFS from a maximum-degree vertex, smallest id first on ties; within
    // the traversal each vertex contributes its not-yet-seen incident edges
    // and then its own weight, so a vertex is forced the moment its own
    // weight is assigned.
    let mut order: Vec<Item> = Vec::new();
    let mut edge_seen = vec![false; edges.len()];
    let mut visited = vec![false; vertices.len()];
    loop {
        let mut start = None;
        for (i, v) in vertices.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let d = g.degree(v)?;
            match start {
                Some((_, best)) if best >= d => {}
                _ => start = Some((i, d)),
            }
        }
        let Some((start, _)) = start else { break };
        let mut queue = std::collections::VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(vi) = queue.pop_front() {
            for u in g.neighbors(&vertices[vi])? {
                let e = Edge::new(vertices[vi].clone(), u.clone());
                let ei = eidx[&e];
                if !edge_seen[ei] {
                    edge_seen[ei] = true;
                    order.push(Item::Edge(ei));
                }
                let ui = vidx[u];
                if !visited[ui] {
                    visited[ui] = true;
                    queue.push_back(ui);
                }
            }
            order.push(Item::Vertex(vi));
        }
    }

    // Split into preassigned items (pins, singletons, and items that touch
    // no finite vertex) and genuine search variables.
    let mut preassigned: Vec<(Item, i64)> = Vec::new();
    let mut search_order: Vec<Item> = Vec::new();
    let mut domains: Vec<Vec<i64>> = Vec::new();
    for item in order {
        let (pin_value, list, constrained) = match item {
            Item::Vertex(vi) => {
                let v = &vertices[vi];
                let pin = pinned.and_then(|p| p.vertex_weight(v));
                (pin, arrange(lists.vertex_list(v)?), finite[vi])
            }
            Item::Edge(ei) => {
                let e = &edges[ei];
                let pin = pinned.and_then(|p| p.edge_weight(e));
                let u = vidx[e.u()];
                let v = vidx[e.v()];
                (pin, arrange(lists.edge_list(e)?), finite[u] || finite[v])
            }
        };
        if let Some(value) = pin_value {
            preassigned.push((item, value));
        } else if list.len() == 1 || !constrained {
            preassigned.push((item, list[0]));
        } else {
            search_order.push(item);
            domains.push(list);
        }
    }

    // Initial sum accounting for finite vertices.
    let n = vertices.len();
    let mut init_sum = vec![0i64; n];
    let mut init_min_rem = vec![0i64; n];
    let mut init_max_rem = vec![0i64; n];
    let touched_by = |item: Item| -> [Option<usize>; 2] {
        match item {
            Item::Vertex(vi) => [finite[vi].then_some(vi), None],
            Item::Edge(ei) => {
                let e = &edges[ei];
                let u = vidx[e.u()];
                let v = vidx[e.v()];
                [finite[u].then_some(u), finite[v].then_some(v)]
            }
        }
    };
    for &(item, value) in &preassigned {
        for vi in touched_by(item).into_iter().flatten() {
            init_sum[vi] += value;
        }
    }
    let mut touches = Vec::with_capacity(search_order.len());
    let mut dom_lo = Vec::with_capacity(search_order.len());
    let mut dom_hi = Vec::with_capacity(search_order.len());
    for (item, dom) in search_order.iter().zip(&domains) {
        let lo = *dom.iter().min().expect("nonempty domain");
        let hi = *dom.iter().max().expect("nonempty domain");
        let t = touched_by(*item);
        for vi in t.into_iter().flatten() {
            init_min_rem[vi] += lo;
            init_max_rem[vi] += hi;
        }
        touches.push(t);
        dom_lo.push(lo);
        dom_hi.push(hi);
    }

    // A pin can already force equal sums on an edge; refute at setup.
    let mut refuted = false;
    'sweep: for e in &edges {
        let u = vidx[e.u()];
        let v = vidx[e.v()];
        if !(finite[u] && finite[v]) {
            continue;
        }
        for vi in [u, v] {
            if init_min_rem[vi] != init_max_rem[vi] {
                continue 'sweep;
            }
        }
        if init_sum[u] + init_min_rem[u] == init_sum[v] + init_min_rem[v] {
            refuted = true;
            break;
        }
    }

    Ok(Compiled {
        vertices,
        edges,
        finite,
        finite_nbrs,
        order: search_order,
        domains,
        touches,
        dom_lo,
        dom_hi,
        preassigned,
        init_sum,
        init_min_rem,
        init_max_rem,
        diagnostic,
        refuted,
    })
}

struct Search<'c> {
    c: &'c Compiled,
    assignment: Vec<i64>,
    sum: Vec<i64>,
    min_rem: Vec<i64>,
    max_rem: Vec<i64>,
    nodes: u64,
    budget: u64,
    aborted: bool,
}

impl<'c> Search<'c> {
    fn new(c: &'c Compiled, budget: u64) -> Self {
        Search {
            assignment: vec![0; c.order.len()],
            sum: c.init_sum.clone(),
            min_rem: c.init_min_rem.clone(),
            max_rem: c.init_max_rem.clone(),
            nodes: 0,
            budget,
            aborted: false,
            c,
        }
    }

    fn forced(&self, vi: usize) -> Option<i64> {
        (self.min_rem[vi] == self.max_rem[vi]).then(|| self.sum[vi] + self.min_rem[vi])
    }

    /// Applies `value`; returns false when a forced edge conflict appears.
    fn apply(&mut self, depth: usize, value: i64) -> bool {
        self.assignment[depth] = value;
        let lo = self.c.dom_lo[depth];
        let hi = self.c.dom_hi[depth];
        let mut ok = true;
        for vi in self.c.touches[depth].into_iter().flatten() {
            self.sum[vi] += value;
            self.min_rem[vi] -= lo;
            self.max_rem[vi] -= hi;
        }
        'check: for vi in self.c.touches[depth].into_iter().flatten() {
            if let Some(s) = self.forced(vi) {
                for &ui in &self.c.finite_nbrs[vi] {
                    if self.forced(ui) == Some(s) {
                        ok = false;
                        break 'check;
                    }
                }
            }
        }
        ok
    }

    fn undo(&mut self, depth: usize, value: i64) {
        let lo = self.c.dom_lo[depth];
        let hi = self.c.dom_hi[depth];
        for vi in self.c.touches[depth].into_iter().flatten() {
            self.sum[vi] -= value;
            self.min_rem[vi] += lo;
            self.max_rem[vi] += hi;
        }
    }

    fn run(&mut self, on_solution: &mut dyn FnMut(Weighting) -> ControlFlow<()>) {
        self.dfs(0, on_solution);
    }

    fn dfs(
        &mut self,
        depth: usize,
        on_solution: &mut dyn FnMut(Weighting) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if depth == self.c.order.len() {
            return on_solution(self.current_weighting());
        }
        let width = self.c.domains[depth].len();
        for k in 0..width {
            let value = self.c.domains[depth][k];
            self.nodes += 1;
            if self.nodes > self.budget {
                self.aborted = true;
                return ControlFlow::Break(());
            }
            if self.apply(depth, value) {
                if let ControlFlow::Break(()) = self.dfs(depth + 1, on_solution) {
                    self.undo(depth, value);
                    return ControlFlow::Break(());
                }
            }
            self.undo(depth, value);
        }
        ControlFlow::Continue(())
    }

    fn current_weighting(&self) -> Weighting {
        let mut vw = BTreeMap::new();
        let mut ew = BTreeMap::new();
        let mut put = |item: Item, value: i64| match item {
            Item::Vertex(vi) => {
                vw.insert(self.c.vertices[vi].clone(), value);
            }
            Item::Edge(ei) => {
                ew.insert(self.c.edges[ei].clone(), value);
            }
        };
        for &(item, value) in &self.c.preassigned {
            put(item, value);
        }
        for (depth, &item) in self.c.order.iter().enumerate() {
            put(item, self.assignment[depth]);
        }
        Weighting::new(vw, ew)
    }
}

/// Searches for a valid weighting of `g` from `lists`, honoring `pinned`
/// values. Deterministic given the config.
pub fn solve(
    g: &FiniteGraph,
    lists: &ListAssignment,
    cfg: &SearchConfig,
    pinned: Option<&Weighting>,
) -> Result<SolveResult> {
    let compiled = compile(g, lists, cfg, pinned)?;
    if let Some(diagnostic) = compiled.diagnostic.clone() {
        return Ok(SolveResult {
            outcome: SolveOutcome::Unsat,
            nodes: 0,
            diagnostic: Some(diagnostic),
        });
    }
    if compiled.refuted {
        return Ok(SolveResult {
            outcome: SolveOutcome::Unsat,
            nodes: 0,
            diagnostic: Some("pinned values force equal sums on an edge".into()),
        });
    }
    let mut search = Search::new(&compiled, cfg.node_budget);
    let mut found: Option<Weighting> = None;
    search.run(&mut |w| {
        found = Some(w);
        ControlFlow::Break(())
    });
    let outcome = match found {
        Some(w) => {
            debug_assert!(crate::weighting::is_valid(g, &w).unwrap_or(false));
            SolveOutcome::Found(w)
        }
        None if search.aborted => SolveOutcome::Aborted,
        None => SolveOutcome::Unsat,
    };
    Ok(SolveResult {
        outcome,
        nodes: search.nodes,
        diagnostic: None,
    })
}

/// Runs one seeded search per entry of `seeds` and merges: the first Found
/// (by seed position) wins; a complete refutation from any run is Unsat.
pub fn solve_portfolio(
    g: &FiniteGraph,
    lists: &ListAssignment,
    cfg: &SearchConfig,
    pinned: Option<&Weighting>,
    seeds: &[u64],
) -> Result<SolveResult> {
    if seeds.is_empty() {
        return solve(g, lists, cfg, pinned);
    }
    let results: Vec<Result<SolveResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| {
                let cfg = SearchConfig {
                    seed: Some(seed),
                    ..*cfg
                };
                scope.spawn(move || solve(g, lists, &cfg, pinned))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut merged: Option<SolveResult> = None;
    for result in results {
        let result = result?;
        match (&merged, &result.outcome) {
            (_, SolveOutcome::Found(_)) => {
                debug_assert!(!matches!(
                    merged.as_ref().map(|m| &m.outcome),
                    Some(SolveOutcome::Unsat)
                ));
                return Ok(result);
            }
            (None, _) | (Some(_), SolveOutcome::Unsat) => merged = Some(result),
            _ => {}
        }
    }
    Ok(merged.expect("at least one seed"))
}

/// Enumerates valid weightings by the solver's search, up to `cap`.
/// Returns the solutions in search order and whether the space was
/// exhausted. This is the solver-path enumerator; [`enumerate_all`] is the
/// independent oracle.
pub fn enumerate_solutions(
    g: &FiniteGraph,
    lists: &ListAssignment,
    cfg: &SearchConfig,
    pinned: Option<&Weighting>,
    cap: usize,
) -> Result<(Vec<Weighting>, bool)> {
    let compiled = compile(g, lists, cfg, pinned)?;
    if compiled.diagnostic.is_some() || compiled.refuted {
        return Ok((Vec::new(), true));
    }
    let mut search = Search::new(&compiled, cfg.node_budget);
    let mut out = Vec::new();
    search.run(&mut |w| {
        out.push(w);
        if out.len() >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let complete = !search.aborted && out.len() < cap;
    Ok((out, complete))
}

/// Thin wrapper over [`solve`].
pub fn solvable(g: &FiniteGraph, lists: &ListAssignment, cfg: &SearchConfig) -> Result<Solvability> {
    Ok(match solve(g, lists, cfg, None)?.outcome {
        SolveOutcome::Found(_) => Solvability::Solvable,
        SolveOutcome::Unsat => Solvability::Unsolvable,
        SolveOutcome::Aborted => Solvability::Unknown,
    })
}

/// Brute-force oracle: every valid weighting of `g` from `lists`, in
/// lexicographic order over (vertices by id, then edges by id) with values
/// ascending, truncated at `limit`.
///
/// Kept independent of the backtracking path: it scans the full cartesian
/// product and recomputes all sums from scratch for each assignment.
pub fn enumerate_all(
    g: &FiniteGraph,
    lists: &ListAssignment,
    limit: Option<usize>,
) -> Result<Vec<Weighting>> {
    let space = lists.assignment_space();
    if limit.is_none() && space > ENUMERATION_SPACE_BOUND {
        return Err(Error::EnumerationTooLarge(space));
    }

    let vertices: Vec<VertexId> = g.vertices().cloned().collect();
    let vidx: BTreeMap<&VertexId, usize> =
        vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let edges: Vec<Edge> = g.edges().cloned().collect();
    let finite: Vec<bool> = vertices
        .iter()
        .map(|v| g.tag(v).map(|t| !t.is_infinite()))
        .collect::<Result<_>>()?;
    let endpoints: Vec<(usize, usize)> = edges
        .iter()
        .map(|e| (vidx[e.u()], vidx[e.v()]))
        .collect();

    let mut domains: Vec<&[i64]> = Vec::new();
    for v in &vertices {
        domains.push(lists.vertex_list(v)?);
    }
    for e in &edges {
        domains.push(lists.edge_list(e)?);
    }
    let nv = vertices.len();
    let items = domains.len();

    let mut counters = vec![0usize; items];
    let mut sums = vec![0i64; nv];
    let mut out = Vec::new();
    if items == 0 {
        // the empty graph has exactly the empty weighting
        out.push(Weighting::default());
        return Ok(out);
    }
    'scan: loop {
        // recompute all finite sums for this assignment
        for vi in 0..nv {
            sums[vi] = domains[vi][counters[vi]];
        }
        for (ei, &(u, v)) in endpoints.iter().enumerate() {
            let value = domains[nv + ei][counters[nv + ei]];
            sums[u] += value;
            sums[v] += value;
        }
        let mut valid = true;
        for (ei, &(u, v)) in endpoints.iter().enumerate() {
            let _ = ei;
            if finite[u] && finite[v] && sums[u] == sums[v] {
                valid = false;
                break;
            }
        }
        if valid {
            let vw = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), domains[i][counters[i]]))
                .collect();
            let ew = edges
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), domains[nv + i][counters[nv + i]]))
                .collect();
            out.push(Weighting::new(vw, ew));
            if let Some(limit) = limit {
                if out.len() >= limit {
                    break 'scan;
                }
            }
        }
        // odometer: last item runs fastest, so output is lexicographic
        let mut pos = items;
        loop {
            if pos == 0 {
                break 'scan;
            }
            pos -= 1;
            counters[pos] += 1;
            if counters[pos] < domains[pos].len() {
                break;
            }
            counters[pos] = 0;
        }
    }
    Ok(out)
}
