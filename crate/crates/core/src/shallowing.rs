//! Deterministic separators `S` with `codepth(S) ≤ (2/ε)·m^{1−ε}` for graphs
//! whose edges all increase.

use std::cmp::Ordering;

use serde::Serialize;

use crate::dag::{codepth, Dag, VertexSet};
use crate::error::{Error, Result};
use crate::fraction::{cmp_with_power, floor_power, floor_scaled_power, Fraction};

/// Scale class `j`: edges with length in `[m^{jε}, m^{(j+1)ε})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleClass {
    pub index: usize,
    /// `c = jε`.
    pub c: Fraction,
    /// `⌈m^c⌉`, the shortest length in the class.
    pub lower: u64,
    /// `⌈m^{c+ε}⌉`, the shortest length above the class.
    pub upper: u64,
    pub edge_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeScale {
    Short,
    Class,
    Long,
}

impl ScaleClass {
    pub fn classify(&self, length: u64) -> EdgeScale {
        if length < self.lower {
            EdgeScale::Short
        } else if length < self.upper {
            EdgeScale::Class
        } else {
            EdgeScale::Long
        }
    }
}

fn check_eps(eps: Fraction) -> Result<()> {
    if !eps.is_open_unit() {
        return Err(Error::param(format!("epsilon {eps} must lie in (0, 1)")));
    }
    Ok(())
}

fn check_increasing(g: &Dag) -> Result<()> {
    match g.edges().iter().find(|&&(x, y)| x >= y) {
        Some(&(x, y)) => Err(Error::NonIncreasingEdge(x, y)),
        None => Ok(()),
    }
}

/// `⌈m^x⌉`.
fn ceil_power(m: u64, x: Fraction) -> u64 {
    let f = floor_power(m, x);
    match cmp_with_power(f, m, x) {
        Ordering::Equal => f,
        _ => f + 1,
    }
}

fn class_thresholds(m: u64, eps: Fraction, classes: usize) -> Result<Vec<u64>> {
    let mut t = Vec::with_capacity(classes + 1);
    for j in 0..classes {
        let c =
            eps.checked_mul(&Fraction::integer(j as u64)).ok_or_else(|| Error::param("scale exponent overflows"))?;
        t.push(ceil_power(m, c));
    }
    // The top class is unbounded above; every edge is shorter than m.
    t.push(u64::MAX);
    Ok(t)
}

/// Number of classes `⌈1/ε⌉`.
pub fn class_count(eps: Fraction) -> usize {
    eps.denom().div_ceil(eps.numer()) as usize
}

/// Smallest class `c ∈ {0, ε, …}` with `|X_c| ≤ ε·d·m`, `d` the maximum indegree.
pub fn pigeonhole_scale(g: &Dag, eps: Fraction) -> Result<ScaleClass> {
    check_eps(eps)?;
    check_increasing(g)?;
    let m = g.vertex_count() as u64;
    let classes = class_count(eps);
    let t = class_thresholds(m, eps, classes)?;
    let mut counts = vec![0usize; classes];
    for &(x, y) in g.edges() {
        let len = (y - x) as u64;
        let j = t.partition_point(|&lo| lo <= len) - 1;
        counts[j] += 1;
    }
    let budget = m * g.max_indegree() as u64;
    let index = counts
        .iter()
        .position(|&k| eps.bounds(k as u64, budget))
        .ok_or_else(|| Error::param("no scale class is sparse enough"))?;
    Ok(ScaleClass {
        index,
        c: eps.checked_mul(&Fraction::integer(index as u64)).expect("checked above"),
        lower: t[index],
        upper: t[index + 1],
        edge_count: counts[index],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShallowingResult {
    pub m: usize,
    pub epsilon: Fraction,
    pub max_indegree: usize,
    pub scale: ScaleClass,
    /// Edges of the chosen class.
    pub class_edges: Vec<(usize, usize)>,
    /// `A = ⌊m^c/ε⌋`.
    pub stride: u64,
    /// `B = ⌊m^c⌋`.
    pub width: u64,
    /// `{x : x mod A < B}`.
    pub residues: Vec<usize>,
    pub separator: Vec<usize>,
    /// `(2/ε)·m^{1−ε}`.
    pub certified_bound: f64,
    /// `⌊(2/ε)·m^{1−ε}⌋`, the integer form of the codepth guarantee.
    pub certified_floor: u64,
    /// `ε(d+1)m`.
    pub size_bound: f64,
    pub size_ok: bool,
}

impl ShallowingResult {
    pub fn separator_set(&self) -> VertexSet {
        VertexSet::from_vertices(self.m, self.separator.iter().copied()).expect("in range")
    }
}

fn codepth_bound(m: u64, eps: Fraction) -> (f64, u64) {
    let rest = Fraction::new(eps.denom() - eps.numer(), eps.denom()).expect("ε < 1");
    let scale = Fraction::new(2 * eps.denom(), eps.numer()).expect("ε > 0");
    let real = 2.0 / eps.to_f64() * (m as f64).powf(rest.to_f64());
    (real, floor_scaled_power(m, rest, scale))
}

pub fn build_separator(g: &Dag, eps: Fraction) -> Result<ShallowingResult> {
    let scale = pigeonhole_scale(g, eps)?;
    let m = g.vertex_count();
    let d = g.max_indegree();
    let inv = Fraction::new(eps.denom(), eps.numer())?;
    let stride = floor_scaled_power(m as u64, scale.c, inv);
    let width = floor_power(m as u64, scale.c);
    debug_assert!(stride >= 1 && width >= 1);
    let class_edges: Vec<(usize, usize)> =
        g.edges().iter().copied().filter(|&(x, y)| scale.classify((y - x) as u64) == EdgeScale::Class).collect();
    let residues: Vec<usize> = (0..m).filter(|&x| (x as u64) % stride < width).collect();
    let mut mask = vec![false; m];
    for &x in residues.iter().chain(class_edges.iter().map(|(x, _)| x)) {
        mask[x] = true;
    }
    let separator: Vec<usize> = (0..m).filter(|&v| mask[v]).collect();
    let (certified_bound, certified_floor) = codepth_bound(m as u64, eps);
    let size_total = (d as u64 + 1) * m as u64;
    Ok(ShallowingResult {
        m,
        epsilon: eps,
        max_indegree: d,
        scale,
        class_edges,
        stride,
        width,
        residues,
        size_ok: eps.bounds(separator.len() as u64, size_total),
        separator,
        certified_bound,
        certified_floor,
        size_bound: eps.to_f64() * size_total as f64,
    })
}

/// Runs [`build_separator`] with `ε = target/(d+1)`, so that the size
/// guarantee reads `|S| ≤ target·m`.
pub fn build_separator_for_target(g: &Dag, target: Fraction) -> Result<ShallowingResult> {
    check_eps(target)?;
    let d = g.max_indegree() as u64;
    let den = target.denom().checked_mul(d + 1).ok_or_else(|| Error::param("target epsilon denominator overflows"))?;
    build_separator(g, Fraction::new(target.numer(), den)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShallowingReport {
    pub size: usize,
    pub size_bound: f64,
    pub size_ok: bool,
    /// Recomputed `codepth(S)`; 0 when `S` is all of `V`.
    pub codepth: usize,
    pub certified_bound: f64,
    pub codepth_ok: bool,
}

impl ShallowingReport {
    pub fn passed(&self) -> bool {
        self.size_ok && self.codepth_ok
    }
}

/// Recomputes `|S|` and `codepth(S)` from `g` and the separator alone.
pub fn verify_shallowing(g: &Dag, r: &ShallowingResult, eps: Fraction) -> Result<ShallowingReport> {
    let m = g.vertex_count();
    let s = VertexSet::from_vertices(m, r.separator.iter().copied())?;
    let size_total = (g.max_indegree() as u64 + 1) * m as u64;
    let depth = if s.len() == m { 0 } else { codepth(g, &s)? };
    let (certified_bound, certified_floor) = codepth_bound(m as u64, eps);
    Ok(ShallowingReport {
        size: s.len(),
        size_bound: eps.to_f64() * size_total as f64,
        size_ok: eps.bounds(s.len() as u64, size_total),
        codepth: depth,
        certified_bound,
        codepth_ok: depth as u64 <= certified_floor,
    })
}
