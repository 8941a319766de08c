//! Directed graph carrier, degree statistics, acyclicity and codepth.
//!
//! Vertices are the dense integers `0..m`. The edge set never contains
//! self-loops and duplicates collapse. Acyclicity is a computed property, not
//! an invariant of [`Dag`]: raw random graphs routinely contain backward edges.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// A directed graph on `0..m` with forward and backward adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dag {
    vertex_count: usize,
    /// Sorted, deduplicated.
    edges: Vec<(usize, usize)>,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
}

impl Dag {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if vertex_count == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut edges: Vec<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
        }
        edges.sort_unstable();
        edges.dedup();

        let (out_offsets, out_targets) = csr(vertex_count, edges.iter().copied());
        let mut reversed: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (v, u)).collect();
        reversed.sort_unstable();
        let (in_offsets, in_sources) = csr(vertex_count, reversed.into_iter());

        Ok(Dag { vertex_count, edges, out_offsets, out_targets, in_offsets, in_sources })
    }

    /// The edgeless graph on `m` vertices.
    pub fn edgeless(vertex_count: usize) -> Result<Self> {
        Dag::new(vertex_count, std::iter::empty())
    }

    /// The path `0 → 1 → … → m-1`.
    pub fn chain(vertex_count: usize) -> Result<Self> {
        Dag::new(vertex_count, (1..vertex_count).map(|v| (v - 1, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.vertex_count
    }

    /// Out-neighbours of `v`, ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// In-neighbours of `v`, ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.in_sources[self.in_offsets[v]..self.in_offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.successors(u).binary_search(&v).is_ok()
    }

    pub fn indegree(&self, v: usize) -> usize {
        self.in_offsets[v + 1] - self.in_offsets[v]
    }

    pub fn outdegree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.indegree(v) + self.outdegree(v)
    }

    pub fn max_indegree(&self) -> usize {
        self.vertices().map(|v| self.indegree(v)).max().unwrap_or(0)
    }

    pub fn is_acyclic(&self) -> bool {
        is_acyclic(self)
    }
}

fn csr(vertex_count: usize, sorted_pairs: impl Iterator<Item = (usize, usize)>) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; vertex_count + 1];
    let mut targets = Vec::new();
    for (u, v) in sorted_pairs {
        offsets[u + 1] += 1;
        targets.push(v);
    }
    for i in 0..vertex_count {
        offsets[i + 1] += offsets[i];
    }
    (offsets, targets)
}

/// A subset of `0..m`, stored as a membership mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VertexSet {
    mask: Vec<bool>,
    len: usize,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet { mask: vec![false; universe], len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        VertexSet { mask: vec![true; universe], len: universe }
    }

    pub fn from_vertices<I>(universe: usize, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = VertexSet::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(Error::VertexOutOfRange { vertex: v, vertex_count: universe });
            }
            set.insert(v);
        }
        Ok(set)
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        let len = mask.iter().filter(|&&b| b).count();
        VertexSet { mask, len }
    }

    pub fn universe(&self) -> usize {
        self.mask.len()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.mask.get(v).copied().unwrap_or(false)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        let fresh = !self.mask[v];
        if fresh {
            self.mask[v] = true;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, v: usize) -> bool {
        let present = self.mask[v];
        if present {
            self.mask[v] = false;
            self.len -= 1;
        }
        present
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask.iter().enumerate().filter_map(|(v, &b)| b.then_some(v))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> VertexSet {
        VertexSet { mask: self.mask.iter().map(|b| !b).collect(), len: self.universe() - self.len }
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }
}

/// In/out degree data for every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub indeg: Vec<usize>,
    pub outdeg: Vec<usize>,
    pub deg: Vec<usize>,
    /// Vertices with indegree 0, ascending.
    pub sources: Vec<usize>,
    /// Vertices with outdegree 0, ascending.
    pub sinks: Vec<usize>,
    pub max_indeg: usize,
    pub max_outdeg: usize,
    pub max_deg: usize,
}

pub fn degree_stats(g: &Dag) -> DegreeStats {
    let indeg: Vec<usize> = g.vertices().map(|v| g.indegree(v)).collect();
    let outdeg: Vec<usize> = g.vertices().map(|v| g.outdegree(v)).collect();
    let deg: Vec<usize> = indeg.iter().zip(&outdeg).map(|(a, b)| a + b).collect();
    DegreeStats {
        sources: g.vertices().filter(|&v| indeg[v] == 0).collect(),
        sinks: g.vertices().filter(|&v| outdeg[v] == 0).collect(),
        max_indeg: indeg.iter().copied().max().unwrap_or(0),
        max_outdeg: outdeg.iter().copied().max().unwrap_or(0),
        max_deg: deg.iter().copied().max().unwrap_or(0),
        indeg,
        outdeg,
        deg,
    }
}

/// Kahn's algorithm, always releasing the smallest available vertex. Returns
/// `None` when the graph has a directed cycle. On graphs whose edges already
/// increase the result is the identity order.
pub fn topological_order(g: &Dag) -> Option<Vec<usize>> {
    let mut remaining: Vec<usize> = g.vertices().map(|v| g.indegree(v)).collect();
    let mut ready: BinaryHeap<Reverse<usize>> = g.vertices().filter(|&v| remaining[v] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(g.vertex_count());
    while let Some(Reverse(v)) = ready.pop() {
        order.push(v);
        for &w in g.successors(v) {
            remaining[w] -= 1;
            if remaining[w] == 0 {
                ready.push(Reverse(w));
            }
        }
    }
    (order.len() == g.vertex_count()).then_some(order)
}

pub fn is_acyclic(g: &Dag) -> bool {
    topological_order(g).is_some()
}

/// Longest-path machinery over a fixed topological order, reused across many
/// removed sets.
#[derive(Clone, Debug)]
pub struct CodepthEvaluator<'g> {
    graph: &'g Dag,
    order: Vec<usize>,
}

impl<'g> CodepthEvaluator<'g> {
    pub fn new(graph: &'g Dag) -> Result<Self> {
        let order = topological_order(graph).ok_or(Error::Cyclic)?;
        Ok(CodepthEvaluator { graph, order })
    }

    pub fn graph(&self) -> &'g Dag {
        self.graph
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Longest path (in edges) ending at each vertex outside `removed`;
    /// `None` for removed vertices.
    pub fn longest_ending_at(&self, removed: &[bool]) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.graph.vertex_count()];
        for &v in &self.order {
            if removed[v] {
                continue;
            }
            let len = self.graph.predecessors(v).iter().filter_map(|&u| best[u]).max().map_or(0, |l| l + 1);
            best[v] = Some(len);
        }
        best
    }

    /// Longest path (in edges) starting at each vertex outside `removed`.
    pub fn longest_starting_at(&self, removed: &[bool]) -> Vec<Option<usize>> {
        let mut best: Vec<Option<usize>> = vec![None; self.graph.vertex_count()];
        for &v in self.order.iter().rev() {
            if removed[v] {
                continue;
            }
            let len = self.graph.successors(v).iter().filter_map(|&w| best[w]).max().map_or(0, |l| l + 1);
            best[v] = Some(len);
        }
        best
    }

    /// Codepth for a removal mask; `None` when every vertex is removed.
    pub fn eval(&self, removed: &[bool]) -> Option<usize> {
        self.longest_ending_at(removed).into_iter().flatten().max()
    }

    /// One longest path avoiding `removed` (smallest end vertex, smallest
    /// predecessor at each step).
    pub fn longest_path(&self, removed: &[bool]) -> Option<Vec<usize>> {
        let best = self.longest_ending_at(removed);
        let top = best.iter().flatten().copied().max()?;
        let mut v = (0..best.len()).find(|&v| best[v] == Some(top))?;
        let mut path = vec![v];
        while let Some(len) = best[v].filter(|&l| l > 0) {
            v = *self.graph.predecessors(v).iter().find(|&&u| best[u] == Some(len - 1)).expect("dp predecessor exists");
            path.push(v);
        }
        path.reverse();
        Some(path)
    }
}

fn check_removed(g: &Dag, s: &VertexSet) -> Result<()> {
    if s.universe() != g.vertex_count() {
        return Err(Error::UniverseMismatch { expected: g.vertex_count(), got: s.universe() });
    }
    if s.len() == g.vertex_count() {
        return Err(Error::ImproperSubset);
    }
    Ok(())
}

/// Maximum length, in edges, of a directed path avoiding `s`. `s` must be a
/// proper subset of the vertices and `g` must be acyclic.
pub fn codepth(g: &Dag, s: &VertexSet) -> Result<usize> {
    check_removed(g, s)?;
    let eval = CodepthEvaluator::new(g)?;
    Ok(eval.eval(s.mask()).expect("some vertex survives"))
}

/// A longest directed path avoiding `s`, as a vertex sequence.
pub fn longest_path_avoiding(g: &Dag, s: &VertexSet) -> Result<Vec<usize>> {
    check_removed(g, s)?;
    let eval = CodepthEvaluator::new(g)?;
    Ok(eval.longest_path(s.mask()).expect("some vertex survives"))
}

/// Length of the longest directed path.
pub fn graph_depth(g: &Dag) -> Result<usize> {
    codepth(g, &VertexSet::empty(g.vertex_count()))
}

/// Subgraph induced by `keep`, relabelled to `0..|keep|` preserving order.
/// Also returns the original id of each new vertex.
pub fn induced_subgraph(g: &Dag, keep: &VertexSet) -> Result<(Dag, Vec<usize>)> {
    if keep.universe() != g.vertex_count() {
        return Err(Error::UniverseMismatch { expected: g.vertex_count(), got: keep.universe() });
    }
    if keep.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let old_ids = keep.to_vec();
    let mut new_id = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in old_ids.iter().enumerate() {
        new_id[v] = i;
    }
    let edges =
        g.edges().iter().filter(|&&(u, v)| keep.contains(u) && keep.contains(v)).map(|&(u, v)| (new_id[u], new_id[v]));
    Ok((Dag::new(old_ids.len(), edges)?, old_ids))
}

/// Relabels an acyclic graph so that every edge increases. Returns the new
/// graph and `perm` with `perm[old] = new`.
pub fn topological_relabel(g: &Dag) -> Result<(Dag, Vec<usize>)> {
    let order = topological_order(g).ok_or(Error::Cyclic)?;
    let mut perm = vec![0usize; g.vertex_count()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let relabelled = Dag::new(g.vertex_count(), g.edges().iter().map(|&(u, v)| (perm[u], perm[v])))?;
    Ok((relabelled, perm))
}

/// `true` iff every edge `(x, y)` has `x < y`.
pub fn has_increasing_edges(g: &Dag) -> bool {
    g.edges().iter().all(|&(x, y)| x < y)
}
