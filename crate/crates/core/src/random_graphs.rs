//! The dyadic edge law ι_n on ℤ_n × ℤ_n, its two samplers, exact pmfs,
//! the random graphs G_n^d, and the cleanup producing bounded-degree dags.
//!
//! `log` is base 2 throughout: `R(n) = ⌊log₂ n⌋`, and the scale `r` of a draw
//! ranges over `0..R(n)`. Elements of ℤ_n are represented by `0..n`, and
//! `a > b` compares those representatives.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dag::{induced_subgraph, Dag, VertexSet};
use crate::error::{Error, Result};
use crate::fraction::{big_ratio, Fraction};

/// Default largest `n` for which the exact pmf is materialized.
pub const DEFAULT_IOTA_CAP: usize = 1 << 12;

/// Default cap on `(v, r, a, b)` tuples visited by the exhaustive sampler laws.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 26;

/// Per-trial generator: ChaCha8 seeded with the master seed, on stream `index`.
pub fn trial_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// `n` together with `R(n) = ⌊log₂ n⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IotaParams {
    n: usize,
    r_count: usize,
}

impl IotaParams {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("n must be at least 2, got {n}")));
        }
        Ok(IotaParams { n, r_count: n.ilog2() as usize })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `R(n)`.
    pub fn r_count(&self) -> usize {
        self.r_count
    }

    /// `n · R(n) · 4^(R(n)−1)`: every ι_n atom is an integer over this.
    pub fn common_denominator(&self) -> u128 {
        self.n as u128 * self.r_count as u128 * 4u128.pow(self.r_count as u32 - 1)
    }

    /// Number of `(v, r, a, b)` tuples, `n · (4^R − 1)/3`.
    pub fn tuple_count(&self) -> u128 {
        self.n as u128 * (4u128.pow(self.r_count as u32) - 1) / 3
    }

    fn add(&self, x: usize, y: usize) -> usize {
        (x + y) % self.n
    }
}

/// The random choices behind one edge: window start `v`, scale `r`, and
/// offsets `a, b ∈ 0..2^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(usize, usize, usize, usize)", into = "(usize, usize, usize, usize)")]
pub struct Draw {
    pub v: usize,
    pub r: usize,
    pub a: usize,
    pub b: usize,
}

impl From<(usize, usize, usize, usize)> for Draw {
    fn from((v, r, a, b): (usize, usize, usize, usize)) -> Self {
        Draw { v, r, a, b }
    }
}

impl From<Draw> for (usize, usize, usize, usize) {
    fn from(d: Draw) -> Self {
        (d.v, d.r, d.a, d.b)
    }
}

impl Draw {
    /// The J_n edge `(v + a, v + 2^r + b)`.
    pub fn edge(&self, p: &IotaParams) -> (usize, usize) {
        (p.add(self.v, self.a), p.add(self.v, (1 << self.r) + self.b))
    }

    /// The J'_n edge `(v, v + 2^r + b − a)`.
    pub fn edge_prime(&self, p: &IotaParams) -> (usize, usize) {
        (self.v, p.add(self.v, (1 << self.r) + self.b - self.a))
    }
}

pub fn sample_draw<R: Rng + ?Sized>(p: &IotaParams, rng: &mut R) -> Draw {
    let v = rng.random_range(0..p.n);
    let r = rng.random_range(0..p.r_count);
    let a = rng.random_range(0..1usize << r);
    let b = rng.random_range(0..1usize << r);
    Draw { v, r, a, b }
}

/// One draw of J_n.
pub fn sample_jn<R: Rng + ?Sized>(p: &IotaParams, rng: &mut R) -> (usize, usize) {
    sample_draw(p, rng).edge(p)
}

/// One draw of J'_n, which has the same law as J_n.
pub fn sample_jn_prime<R: Rng + ?Sized>(p: &IotaParams, rng: &mut R) -> (usize, usize) {
    sample_draw(p, rng).edge_prime(p)
}

/// An exact-rational probability mass function over a finite outcome set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution<T: Ord> {
    masses: BTreeMap<T, BigRational>,
}

impl<T: Ord + Clone> ExactDistribution<T> {
    /// Builds from integer weights over a common denominator; zero weights are
    /// dropped.
    pub fn from_weights(weights: BTreeMap<T, u128>, denominator: u128) -> Result<Self> {
        let total: u128 = weights.values().sum();
        if total != denominator {
            return Err(Error::param(format!("weights sum to {total}, expected {denominator}")));
        }
        let masses = weights.into_iter().filter(|(_, w)| *w > 0).map(|(k, w)| (k, big_ratio(w, denominator))).collect();
        Ok(ExactDistribution { masses })
    }

    pub fn probability(&self, outcome: &T) -> BigRational {
        self.masses.get(outcome).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.masses.values().fold(BigRational::zero(), |acc, m| acc + m)
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.masses.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &BigRational)> {
        self.masses.iter()
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    /// Mass of the outcomes satisfying `pred`.
    pub fn mass_where(&self, mut pred: impl FnMut(&T) -> bool) -> BigRational {
        self.masses.iter().filter(|(k, _)| pred(k)).fold(BigRational::zero(), |acc, (_, m)| acc + m)
    }

    /// Push-forward along `f`.
    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> ExactDistribution<U> {
        let mut masses: BTreeMap<U, BigRational> = BTreeMap::new();
        for (k, m) in &self.masses {
            *masses.entry(f(k)).or_insert_with(BigRational::zero) += m;
        }
        ExactDistribution { masses }
    }
}

/// Numerators, over [`IotaParams::common_denominator`], of `ι_n(x, x + δ)`
/// indexed by the offset `δ ∈ 0..n`.
///
/// For a fixed scale `r` the offset of a J'_n edge is `2^r + b − a`, which
/// equals `δ` for `2^r − |δ − 2^r|` pairs `(a, b)` when that is positive.
pub fn iota_offset_weights(p: &IotaParams) -> Vec<u128> {
    let top = p.r_count as u32 - 1;
    let mut weights = vec![0u128; p.n];
    for (delta, w) in weights.iter_mut().enumerate() {
        for r in 0..p.r_count {
            let width = 1i64 << r;
            let hits = width - (delta as i64 - width).abs();
            if hits > 0 {
                *w += hits as u128 * 4u128.pow(top - r as u32);
            }
        }
    }
    weights
}

/// The exact law ι_n, built from the translation-invariant offset profile.
pub fn iota_pmf(p: &IotaParams, cap: usize) -> Result<ExactDistribution<(usize, usize)>> {
    if p.n > cap {
        return Err(Error::BudgetExceeded { required: p.n as u128, budget: cap as u128 });
    }
    let offsets = iota_offset_weights(p);
    let denom = p.common_denominator();
    let mut weights = BTreeMap::new();
    for x in 0..p.n {
        for (delta, &w) in offsets.iter().enumerate() {
            if w > 0 {
                weights.insert((x, p.add(x, delta)), w);
            }
        }
    }
    ExactDistribution::from_weights(weights, denom)
}

fn enumerate_law(
    p: &IotaParams,
    cap: u128,
    edge: impl Fn(&Draw) -> (usize, usize),
) -> Result<ExactDistribution<(usize, usize)>> {
    let required = p.tuple_count();
    if required > cap {
        return Err(Error::BudgetExceeded { required, budget: cap });
    }
    let top = p.r_count as u32 - 1;
    let mut weights: BTreeMap<(usize, usize), u128> = BTreeMap::new();
    for v in 0..p.n {
        for r in 0..p.r_count {
            // Each tuple at scale r has probability 4^(R−1−r) / denominator.
            let w = 4u128.pow(top - r as u32);
            for a in 0..1usize << r {
                for b in 0..1usize << r {
                    *weights.entry(edge(&Draw { v, r, a, b })).or_insert(0) += w;
                }
            }
        }
    }
    ExactDistribution::from_weights(weights, p.common_denominator())
}

/// Outcome law of [`sample_jn`], by visiting every `(v, r, a, b)`.
pub fn enumerate_jn_law(p: &IotaParams, cap: u128) -> Result<ExactDistribution<(usize, usize)>> {
    enumerate_law(p, cap, |d| d.edge(p))
}

/// Outcome law of [`sample_jn_prime`], by visiting every `(v, r, a, b)`.
pub fn enumerate_jn_prime_law(p: &IotaParams, cap: u128) -> Result<ExactDistribution<(usize, usize)>> {
    enumerate_law(p, cap, |d| d.edge_prime(p))
}

/// Exact ι_n-mass of `{(x, y) : x > y}`.
///
/// By translation invariance this is `Σ_δ δ · ι_n(0, δ)`: an edge of offset `δ`
/// wraps around exactly for the `δ` starting points `x ≥ n − δ`.
pub fn backward_mass(p: &IotaParams, cap: usize) -> Result<BigRational> {
    if p.n > cap {
        return Err(Error::BudgetExceeded { required: p.n as u128, budget: cap as u128 });
    }
    let offsets = iota_offset_weights(p);
    let num: u128 = offsets.iter().enumerate().map(|(delta, &w)| delta as u128 * w).sum();
    Ok(big_ratio(num, p.common_denominator()))
}

/// `2 / R(n)`.
pub fn backward_mass_bound(p: &IotaParams) -> BigRational {
    BigRational::new(BigInt::from(2), BigInt::from(p.r_count))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GndConfig {
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl GndConfig {
    pub fn new(n: usize, d: usize, seed: u64) -> Result<Self> {
        IotaParams::new(n)?;
        if d == 0 {
            return Err(Error::param("d must be at least 1"));
        }
        Ok(GndConfig { n, d, seed })
    }

    pub fn iota(&self) -> IotaParams {
        IotaParams::new(self.n).expect("validated")
    }

    pub fn draw_count(&self) -> usize {
        self.n * self.d
    }
}

/// A sample of G_n^d: the (possibly cyclic) graph and the draws behind it.
#[derive(Clone, Debug)]
pub struct RawGraph {
    pub graph: Dag,
    pub draws: Vec<Draw>,
}

impl RawGraph {
    /// Draws whose edge goes backward, counted with multiplicity.
    pub fn backward_draws(&self) -> usize {
        let p = IotaParams::new(self.graph.vertex_count()).expect("n ≥ 2");
        self.draws
            .iter()
            .filter(|d| {
                let (x, y) = d.edge(&p);
                x > y
            })
            .count()
    }
}

/// `dn` independent J_n draws on ℤ_n using [`ChaCha8Rng`] seeded from `c.seed`.
pub fn generate_gnd(c: &GndConfig) -> RawGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    generate_gnd_with(c, &mut rng)
}

pub fn generate_gnd_with<R: Rng + ?Sized>(c: &GndConfig, rng: &mut R) -> RawGraph {
    let p = c.iota();
    let draws: Vec<Draw> = (0..c.draw_count()).map(|_| sample_draw(&p, rng)).collect();
    let graph = Dag::new(c.n, draws.iter().map(|d| d.edge(&p))).expect("J_n never emits loops");
    RawGraph { graph, draws }
}

/// Degree cap `Δ`: vertices of degree `≥ 2Δ` are removed by the cleanup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanupConfig {
    pub delta: usize,
}

impl CleanupConfig {
    pub fn new(delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(Error::param("degree cap must be at least 1"));
        }
        Ok(CleanupConfig { delta })
    }
}

#[derive(Clone, Debug)]
pub struct Cleanup {
    /// Induced subgraph on the survivors, relabelled in increasing order.
    pub graph: Dag,
    /// Original id of each surviving vertex.
    pub kept: Vec<usize>,
    /// The removed set `B`, ascending.
    pub removed: Vec<usize>,
    pub high_degree: usize,
    pub backward_sources: usize,
}

/// Removes `B = {v : deg(v) ≥ 2Δ} ∪ {a : (a, b) ∈ E, a > b}`. Every surviving
/// edge increases, so the result is acyclic with max degree `< 2Δ`.
pub fn cleanup_to_hn(g: &Dag, cfg: &CleanupConfig) -> Result<Cleanup> {
    let m = g.vertex_count();
    let mut removed = VertexSet::empty(m);
    let mut high_degree = 0;
    for v in g.vertices() {
        if g.degree(v) >= 2 * cfg.delta {
            removed.insert(v);
            high_degree += 1;
        }
    }
    let mut sources = VertexSet::empty(m);
    for &(a, b) in g.edges() {
        if a > b {
            sources.insert(a);
            removed.insert(a);
        }
    }
    let keep = removed.complement();
    if keep.is_empty() {
        return Err(Error::EmptyResult);
    }
    let (graph, kept) = induced_subgraph(g, &keep)?;
    Ok(Cleanup { graph, kept, removed: removed.to_vec(), high_degree, backward_sources: sources.len() })
}

/// Monte-Carlo frequency of an event, with its binomial standard error.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EventEstimate {
    pub hits: usize,
    pub trials: usize,
    pub frequency: f64,
    /// `√(p̂(1 − p̂)/trials)`.
    pub sigma: f64,
    pub bound: f64,
}

impl EventEstimate {
    pub fn new(hits: usize, trials: usize, bound: f64) -> Self {
        let frequency = hits as f64 / trials as f64;
        EventEstimate { hits, trials, frequency, sigma: (frequency * (1.0 - frequency) / trials as f64).sqrt(), bound }
    }

    /// `frequency ≤ bound + k·σ`.
    pub fn within(&self, sigmas: f64) -> bool {
        self.frequency <= self.bound + sigmas * self.sigma
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TailReport {
    /// `|{v : deg(v) ≥ 2Δ}| ≥ εn`, against `2d^Δ / (Δ!·ε)`.
    pub high_degree: EventEstimate,
    /// `|{(x, y) ∈ E : x > y}| ≥ εdn`, against `2d / (ε·R(n))`.
    pub backward_edges: EventEstimate,
}

/// `2d^Δ / (Δ!·ε)`.
pub fn high_degree_tail_bound(d: usize, delta: usize, eps: f64) -> f64 {
    let log = delta as f64 * (d as f64).ln() - (1..=delta).map(|i| (i as f64).ln()).sum::<f64>();
    2.0 * log.exp() / eps
}

/// `2d / (ε·R(n))`.
pub fn backward_tail_bound(d: usize, p: &IotaParams, eps: f64) -> f64 {
    2.0 * d as f64 / (eps * p.r_count() as f64)
}

/// Runs `trials` independent samples of G_n^d (trial `i` uses
/// `trial_rng(c.seed, i)`) and counts both tail events.
pub fn tail_experiment(c: &GndConfig, cfg: &CleanupConfig, eps: Fraction, trials: usize) -> Result<TailReport> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let n = c.n as u64;
    let dn = c.draw_count() as u64;
    let outcomes: Vec<(bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let raw = generate_gnd_with(c, &mut trial_rng(c.seed, i as u64));
            let g = &raw.graph;
            let high = g.vertices().filter(|&v| g.degree(v) >= 2 * cfg.delta).count() as u64;
            let backward = g.edges().iter().filter(|&&(x, y)| x > y).count() as u64;
            (eps.reached_by(high, n), eps.reached_by(backward, dn))
        })
        .collect();
    let eps_f = eps.to_f64();
    let p = c.iota();
    Ok(TailReport {
        high_degree: EventEstimate::new(
            outcomes.iter().filter(|o| o.0).count(),
            trials,
            high_degree_tail_bound(c.d, cfg.delta, eps_f),
        ),
        backward_edges: EventEstimate::new(
            outcomes.iter().filter(|o| o.1).count(),
            trials,
            backward_tail_bound(c.d, &p, eps_f),
        ),
    })
}

/// A random DAG on `0..m` with increasing edges and indegree at most `d`.
///
/// Vertex `y` draws up to `d` predecessors at offsets that are log-uniform in
/// `1..=y`, so edge lengths spread over every scale. This is a test-bed
/// generator, not one of the laws above.
pub fn random_increasing_dag(m: usize, d: usize, seed: u64) -> Result<Dag> {
    if m == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * d);
    for y in 1..m {
        for _ in 0..d {
            let scale: f64 = rng.random::<f64>() * ((y as f64) + 1.0).log2();
            let offset = (scale.exp2() as usize).clamp(1, y);
            edges.push((y - offset, y));
        }
    }
    Dag::new(m, edges)
}

/// `true` iff the exact law has total mass one and no diagonal atoms.
pub fn is_proper_edge_law(dist: &ExactDistribution<(usize, usize)>) -> bool {
    dist.total_mass().is_one() && dist.support().all(|(x, y)| x != y)
}
