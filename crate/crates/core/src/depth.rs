//! Depth functions: the canonical `δ_S`, the edge-set induced `δ'_D`,
//! validation against a graph, extraction of a witnessing edge set, and
//! exhaustive enumeration.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dag::{topological_order, Dag, VertexSet};
use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Default cap on `(ρ+1)^m` for [`enumerate_depth_functions`].
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(usize),
    Infinite,
}

impl Level {
    pub fn finite(self) -> Option<usize> {
        match self {
            Level::Finite(l) => Some(l),
            Level::Infinite => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(l) => write!(f, "{l}"),
            Level::Infinite => f.write_str("inf"),
        }
    }
}

/// Vertex-indexed levels in ℕ ∪ {∞}. Serialized as a JSON integer array with
/// `-1` standing for ∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DepthFunction {
    levels: Vec<Level>,
}

impl DepthFunction {
    pub fn new(levels: Vec<Level>) -> Self {
        DepthFunction { levels }
    }

    pub fn from_finite(levels: Vec<usize>) -> Self {
        DepthFunction { levels: levels.into_iter().map(Level::Finite).collect() }
    }

    pub fn zero(m: usize) -> Self {
        DepthFunction::from_finite(vec![0; m])
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn level(&self, v: usize) -> Level {
        self.levels[v]
    }

    /// All levels, if none is ∞.
    pub fn finite_levels(&self) -> Option<Vec<usize>> {
        self.levels.iter().map(|l| l.finite()).collect()
    }

    pub fn max_level(&self) -> Level {
        self.levels.iter().copied().max().unwrap_or(Level::Finite(0))
    }

    /// `f⁻¹(0) ∖ Out(G)`.
    pub fn zero_non_sinks(&self, g: &Dag) -> VertexSet {
        let mut s = VertexSet::empty(g.vertex_count());
        for v in g.vertices() {
            if self.levels[v] == Level::Finite(0) && g.outdegree(v) > 0 {
                s.insert(v);
            }
        }
        s
    }
}

impl Serialize for DepthFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw: Vec<i64> = self
            .levels
            .iter()
            .map(|l| match l {
                Level::Finite(v) => *v as i64,
                Level::Infinite => -1,
            })
            .collect();
        raw.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DepthFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<i64>::deserialize(d)?;
        raw.into_iter()
            .map(|v| match v {
                -1 => Ok(Level::Infinite),
                v if v >= 0 => Ok(Level::Finite(v as usize)),
                v => Err(serde::de::Error::custom(format!("invalid level {v}"))),
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(DepthFunction::new)
    }
}

/// `(ε, ρ)` for depth functions. `ε` is kept exact; values in `[0, 1]` are
/// accepted so that the `δ_S` parameter `|S ∖ Out(G)| / |V(G)|` can be checked
/// even when it is 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DepthParams {
    pub epsilon: Fraction,
    pub rho: usize,
}

impl DepthParams {
    pub fn new(epsilon: Fraction, rho: usize) -> Result<Self> {
        if epsilon > Fraction::one() {
            return Err(Error::param(format!("epsilon {epsilon} exceeds 1")));
        }
        Ok(DepthParams { epsilon, rho })
    }
}

/// `δ_S`: 0 on `S ∪ Out(G)`, otherwise the longest path to `S ∪ Out(G)` whose
/// vertices before the last one avoid `S`.
pub fn delta_s(g: &Dag, s: &VertexSet) -> Result<DepthFunction> {
    if s.universe() != g.vertex_count() {
        return Err(Error::UniverseMismatch { expected: g.vertex_count(), got: s.universe() });
    }
    let order = topological_order(g).ok_or(Error::Cyclic)?;
    let mut levels = vec![0usize; g.vertex_count()];
    for &v in order.iter().rev() {
        if s.contains(v) || g.outdegree(v) == 0 {
            continue;
        }
        levels[v] = 1 + g.successors(v).iter().map(|&w| levels[w]).max().unwrap_or(0);
    }
    Ok(DepthFunction::from_finite(levels))
}

/// `δ'_D`: longest path from each vertex to a sink of `(V, D)`, ∞ for vertices
/// that reach a cycle of `D`.
pub fn delta_prime(g: &Dag, d_set: &[(usize, usize)]) -> Result<DepthFunction> {
    for &(u, v) in d_set {
        if !g.has_edge(u, v) {
            return Err(Error::ForeignEdge(u, v));
        }
    }
    let sub = Dag::new(g.vertex_count(), d_set.iter().copied())?;
    Ok(sink_distance(&sub))
}

/// Peels sinks of `h` layer by layer; whatever survives reaches a cycle.
fn sink_distance(h: &Dag) -> DepthFunction {
    let m = h.vertex_count();
    let mut remaining_out: Vec<usize> = h.vertices().map(|v| h.outdegree(v)).collect();
    let mut level: Vec<Option<usize>> = vec![None; m];
    let mut stack: Vec<usize> = h.vertices().filter(|&v| remaining_out[v] == 0).collect();
    while let Some(v) = stack.pop() {
        level[v] = Some(h.successors(v).iter().map(|&w| level[w].unwrap() + 1).max().unwrap_or(0));
        for &u in h.predecessors(v) {
            remaining_out[u] -= 1;
            if remaining_out[u] == 0 {
                stack.push(u);
            }
        }
    }
    DepthFunction::new(level.into_iter().map(|l| l.map_or(Level::Infinite, Level::Finite)).collect())
}

/// Both depth-function conditions: every edge `(a, b)` has `f(a) > f(b)` or
/// `f(a) = 0`, and every positive level has a successor exactly one below.
pub fn is_depth_function(g: &Dag, f: &DepthFunction) -> bool {
    let Some(levels) = f.finite_levels() else {
        return false;
    };
    if levels.len() != g.vertex_count() {
        return false;
    }
    let edges_ok = g.edges().iter().all(|&(a, b)| levels[a] == 0 || levels[a] > levels[b]);
    edges_ok && g.vertices().all(|a| levels[a] == 0 || g.successors(a).iter().any(|&b| levels[b] + 1 == levels[a]))
}

pub fn is_eps_rho_depth_function(g: &Dag, f: &DepthFunction, p: &DepthParams) -> bool {
    if !is_depth_function(g, f) || f.max_level() > Level::Finite(p.rho) {
        return false;
    }
    let zeros = f.zero_non_sinks(g).len() as u64;
    p.epsilon.bounds(zeros, g.vertex_count() as u64)
}

/// Which admissible successor `n(v)` [`extract_depth_set_with`] picks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieBreak {
    #[default]
    Smallest,
    Largest,
}

/// `D = {(v, n(v)) : f(v) ≠ 0}` with `n(v)` the smallest admissible successor.
/// Satisfies `|D| ≤ m` and `δ'_D = f`.
pub fn extract_depth_set(g: &Dag, f: &DepthFunction) -> Result<Vec<(usize, usize)>> {
    extract_depth_set_with(g, f, TieBreak::Smallest)
}

pub fn extract_depth_set_with(g: &Dag, f: &DepthFunction, tie: TieBreak) -> Result<Vec<(usize, usize)>> {
    if !is_depth_function(g, f) {
        return Err(Error::NotADepthFunction { vertex: first_violation(g, f).unwrap_or(0) });
    }
    let levels = f.finite_levels().expect("checked finite");
    let mut d = Vec::new();
    for v in g.vertices().filter(|&v| levels[v] != 0) {
        let mut admissible = g.successors(v).iter().copied().filter(|&w| levels[w] + 1 == levels[v]);
        let next = match tie {
            TieBreak::Smallest => admissible.next(),
            TieBreak::Largest => admissible.next_back(),
        };
        d.push((v, next.expect("condition (b) holds")));
    }
    Ok(d)
}

/// First vertex breaking either condition (or carrying ∞).
pub fn first_violation(g: &Dag, f: &DepthFunction) -> Option<usize> {
    let level = |v: usize| f.levels().get(v).and_then(|l| l.finite());
    g.vertices().find(|&a| match level(a) {
        None => true,
        Some(0) => false,
        Some(la) => {
            let succ = g.successors(a);
            succ.iter().any(|&b| level(b).is_none_or(|lb| lb >= la)) || !succ.iter().any(|&b| level(b) == Some(la - 1))
        }
    })
}

/// `(ρ+1)^m`, saturating.
pub fn enumeration_space(m: usize, rho: usize) -> u128 {
    let base = rho as u128 + 1;
    (0..m).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
}

/// Streams every `(ε, ρ)`-depth function of `g` in lexicographic order of the
/// level vectors. Refuses to start when `(ρ+1)^m` exceeds `budget`.
pub fn enumerate_depth_functions<'g>(g: &'g Dag, p: &DepthParams, budget: u128) -> Result<DepthFunctions<'g>> {
    let required = enumeration_space(g.vertex_count(), p.rho);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(DepthFunctions::new(g, p))
}

/// Whether `g` admits at least one `(ε, ρ)`-depth function.
pub fn admits_depth_function(g: &Dag, p: &DepthParams, budget: u128) -> Result<bool> {
    Ok(enumerate_depth_functions(g, p, budget)?.next().is_some())
}

/// Backtracking iterator behind [`enumerate_depth_functions`]. Vertices are
/// assigned in index order; edge condition (a) is checked as soon as both
/// endpoints carry a level, condition (b) as soon as a vertex and all its
/// successors do, and the zero budget `⌊εm⌋` is enforced incrementally.
pub struct DepthFunctions<'g> {
    graph: &'g Dag,
    rho: usize,
    max_zero_non_sinks: usize,
    /// Vertices whose neighbourhood is fully assigned once index `i` is.
    completes_at: Vec<Vec<usize>>,
    levels: Vec<usize>,
    cursor: Vec<usize>,
    assigned: Vec<bool>,
    zero_non_sinks: usize,
    pos: usize,
    done: bool,
}

impl<'g> DepthFunctions<'g> {
    fn new(graph: &'g Dag, p: &DepthParams) -> Self {
        let m = graph.vertex_count();
        let mut completes_at = vec![Vec::new(); m];
        for v in graph.vertices() {
            let last = graph.successors(v).iter().copied().max().unwrap_or(0).max(v);
            completes_at[last].push(v);
        }
        DepthFunctions {
            graph,
            rho: p.rho,
            max_zero_non_sinks: p.epsilon.floor_times(m as u64) as usize,
            completes_at,
            levels: vec![0; m],
            cursor: vec![0; m],
            assigned: vec![false; m],
            zero_non_sinks: 0,
            pos: 0,
            done: false,
        }
    }

    fn counts_toward_zero_budget(&self, v: usize) -> bool {
        self.levels[v] == 0 && self.graph.outdegree(v) > 0
    }

    fn unassign(&mut self, i: usize) {
        if self.assigned[i] {
            if self.counts_toward_zero_budget(i) {
                self.zero_non_sinks -= 1;
            }
            self.assigned[i] = false;
        }
    }

    fn consistent(&self, i: usize) -> bool {
        let g = self.graph;
        let lv = &self.levels;
        let forward_ok = g.successors(i).iter().filter(|&&w| w < i).all(|&w| lv[i] == 0 || lv[i] > lv[w]);
        let backward_ok = g.predecessors(i).iter().filter(|&&u| u < i).all(|&u| lv[u] == 0 || lv[u] > lv[i]);
        forward_ok
            && backward_ok
            && self.completes_at[i].iter().all(|&a| lv[a] == 0 || g.successors(a).iter().any(|&b| lv[b] + 1 == lv[a]))
    }
}

impl Iterator for DepthFunctions<'_> {
    type Item = DepthFunction;

    fn next(&mut self) -> Option<DepthFunction> {
        let m = self.graph.vertex_count();
        loop {
            if self.done {
                return None;
            }
            if self.pos == m {
                let found = DepthFunction::from_finite(self.levels.clone());
                self.pos = m - 1;
                return Some(found);
            }
            let i = self.pos;
            self.unassign(i);
            let candidate = self.cursor[i];
            if candidate > self.rho {
                self.cursor[i] = 0;
                if i == 0 {
                    self.done = true;
                    return None;
                }
                self.pos -= 1;
                continue;
            }
            self.cursor[i] += 1;
            self.levels[i] = candidate;
            if self.counts_toward_zero_budget(i) {
                if self.zero_non_sinks == self.max_zero_non_sinks {
                    continue;
                }
                self.zero_non_sinks += 1;
            }
            self.assigned[i] = true;
            if self.consistent(i) {
                self.pos += 1;
            }
        }
    }
}
