//! Deciding and attacking the `(ε, ρ)`-extender property, plus the exact
//! window certificates for labelings of ℤ_n under ι_n.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dag::{codepth, CodepthEvaluator, Dag, VertexSet};
use crate::depth::{admits_depth_function, DepthParams};
use crate::entropy::{binary_entropy, exceedance_probability, ExactLaw};
use crate::error::{Error, Result};
use crate::fraction::{big_ratio, floor_power, Fraction};
use crate::random_graphs::{generate_gnd_with, trial_rng, EventEstimate, GndConfig, IotaParams};

/// Default cap on the number of removed sets visited by the brute force.
pub const DEFAULT_SUBSET_BUDGET: u128 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtenderParams {
    pub epsilon: Fraction,
    pub rho: usize,
    /// Sequence constant `C` when the parameters come from a `(ρ_n)` curve.
    pub constant: Option<f64>,
}

impl ExtenderParams {
    pub fn new(epsilon: Fraction, rho: usize) -> Result<Self> {
        if !epsilon.is_open_unit() {
            return Err(Error::param(format!("epsilon {epsilon} must lie in (0, 1)")));
        }
        Ok(ExtenderParams { epsilon, rho, constant: None })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A set with `|S| ≤ εm` whose codepth is below `ρ`.
    Refuting { set: Vec<usize>, codepth: usize },
    /// Every admissible set was checked.
    Exhausted { subsets_checked: u128 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtenderVerdict {
    pub is_extender: bool,
    pub witness: Witness,
}

/// `C(m, k)`, saturating.
pub fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((m - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `Σ_{i ≤ k} C(m, i)`, saturating.
pub fn subsets_up_to(m: usize, k: usize) -> u128 {
    (0..=k.min(m)).fold(0u128, |acc, i| acc.saturating_add(binomial(m, i)))
}

/// The `rank`-th `k`-subset of `0..m` in lexicographic order.
pub fn unrank_combination(m: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        loop {
            let block = binomial(m - next - 1, left);
            if rank < block {
                break;
            }
            rank -= block;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Checks every `S` with `|S| ≤ εm`, smallest sizes first and
/// lexicographically within a size, and returns the first one with
/// `codepth(S) < ρ`. Sizes are searched in parallel by rank.
pub fn decide_extender_bruteforce(g: &Dag, p: &ExtenderParams, budget: u128) -> Result<ExtenderVerdict> {
    let m = g.vertex_count();
    let max_size = p.epsilon.floor_times(m as u64) as usize;
    let max_size = max_size.min(m - 1);
    let required = subsets_up_to(m, max_size);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let eval = CodepthEvaluator::new(g)?;
    for size in 0..=max_size {
        let count = binomial(m, size) as usize;
        let found = (0..count).into_par_iter().find_map_first(|rank| {
            let set = unrank_combination(m, size, rank as u128);
            let mut mask = vec![false; m];
            for &v in &set {
                mask[v] = true;
            }
            let depth = eval.eval(&mask).expect("proper subset");
            (depth < p.rho).then_some((set, depth))
        });
        if let Some((set, codepth)) = found {
            return Ok(ExtenderVerdict { is_extender: false, witness: Witness::Refuting { set, codepth } });
        }
    }
    Ok(ExtenderVerdict { is_extender: true, witness: Witness::Exhausted { subsets_checked: required } })
}

/// Exact `min_{|S| ≤ k} codepth(S)` by exhaustive search (with a minimizing set).
pub fn min_codepth_exhaustive(g: &Dag, k: usize, budget: u128) -> Result<(Vec<usize>, usize)> {
    let m = g.vertex_count();
    let k = k.min(m - 1);
    let required = subsets_up_to(m, k);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let eval = CodepthEvaluator::new(g)?;
    let mut best: Option<(Vec<usize>, usize)> = None;
    for size in 0..=k {
        let count = binomial(m, size) as usize;
        let candidate = (0..count)
            .into_par_iter()
            .map(|rank| {
                let set = unrank_combination(m, size, rank as u128);
                let mut mask = vec![false; m];
                for &v in &set {
                    mask[v] = true;
                }
                (eval.eval(&mask).expect("proper subset"), rank, set)
            })
            .min_by_key(|(d, rank, _)| (*d, *rank));
        if let Some((d, _, set)) = candidate {
            if best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((set, d));
            }
        }
    }
    Ok(best.expect("the empty set is always a candidate"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttackStrategy {
    /// Repeatedly remove the vertex lying on the most longest paths.
    Greedy,
    /// Per restart, repeatedly remove a uniformly random vertex of a longest
    /// path; keep the best restart.
    RandomRestarts { restarts: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AttackResult {
    pub set: Vec<usize>,
    pub codepth: usize,
}

/// Heuristic upper bound on `min_{|S| ≤ budget} codepth(S)`.
pub fn min_codepth_attack(g: &Dag, budget_size: usize, strategy: AttackStrategy) -> Result<AttackResult> {
    let m = g.vertex_count();
    if budget_size >= m {
        return Err(Error::param(format!("attack budget {budget_size} must be below {m}")));
    }
    let eval = CodepthEvaluator::new(g)?;
    let set = match strategy {
        AttackStrategy::Greedy => greedy_attack(&eval, budget_size),
        AttackStrategy::RandomRestarts { restarts, seed } => {
            let restarts = restarts.max(1);
            (0..restarts)
                .into_par_iter()
                .map(|i| {
                    let s = random_path_attack(&eval, budget_size, seed, i as u64);
                    let mask = to_mask(m, &s);
                    (eval.eval(&mask).expect("proper"), i, s)
                })
                .min_by_key(|(d, i, _)| (*d, *i))
                .map(|(_, _, s)| s)
                .expect("at least one restart")
        }
    };
    let s = VertexSet::from_vertices(m, set.iter().copied())?;
    let codepth = codepth(g, &s)?;
    Ok(AttackResult { set: s.to_vec(), codepth })
}

fn to_mask(m: usize, set: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; m];
    for &v in set {
        mask[v] = true;
    }
    mask
}

fn greedy_attack(eval: &CodepthEvaluator<'_>, budget: usize) -> Vec<usize> {
    let g = eval.graph();
    let m = g.vertex_count();
    let mut removed = vec![false; m];
    let mut set = Vec::new();
    while set.len() < budget {
        let ending = eval.longest_ending_at(&removed);
        let starting = eval.longest_starting_at(&removed);
        let longest = ending.iter().flatten().copied().max().unwrap_or(0);
        if longest == 0 {
            break;
        }
        // Number of maximum-length paths ending / starting at each vertex.
        let mut count_end = vec![0u128; m];
        for &v in eval.order() {
            let Some(e) = ending[v] else { continue };
            count_end[v] = if e == 0 {
                1
            } else {
                g.predecessors(v)
                    .iter()
                    .filter(|&&u| ending[u] == Some(e - 1))
                    .fold(0u128, |acc, &u| acc.saturating_add(count_end[u]))
            };
        }
        let mut count_start = vec![0u128; m];
        for &v in eval.order().iter().rev() {
            let Some(s) = starting[v] else { continue };
            count_start[v] = if s == 0 {
                1
            } else {
                g.successors(v)
                    .iter()
                    .filter(|&&w| starting[w] == Some(s - 1))
                    .fold(0u128, |acc, &w| acc.saturating_add(count_start[w]))
            };
        }
        let pick = g
            .vertices()
            .filter(|&v| matches!((ending[v], starting[v]), (Some(e), Some(s)) if e + s == longest))
            .max_by(|&a, &b| {
                let ca = count_end[a].saturating_mul(count_start[a]);
                let cb = count_end[b].saturating_mul(count_start[b]);
                ca.cmp(&cb).then(b.cmp(&a))
            })
            .expect("a longest path exists");
        removed[pick] = true;
        set.push(pick);
    }
    set
}

fn random_path_attack(eval: &CodepthEvaluator<'_>, budget: usize, seed: u64, index: u64) -> Vec<usize> {
    let m = eval.graph().vertex_count();
    let mut rng = trial_rng(seed, index);
    let mut removed = vec![false; m];
    let mut set = Vec::new();
    while set.len() < budget {
        let path = eval.longest_path(&removed).expect("proper subset");
        if path.len() <= 1 {
            break;
        }
        let v = path[rng.random_range(0..path.len())];
        removed[v] = true;
        set.push(v);
    }
    set
}

/// `k = ⌊n^{ε³}⌋`, exact at integer boundaries.
pub fn label_bound(n: usize, eps: Fraction) -> usize {
    match eps.cube() {
        Some(cube) => floor_power(n as u64, cube) as usize,
        None => ((n as f64).powf(eps.to_f64().powi(3))).floor() as usize,
    }
}

/// Exact `ι_n({(a, b) : l(a) > l(b)})` against `1/2 + 4ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LabelingCertificate {
    #[serde(serialize_with = "serialize_ratio")]
    pub mass: BigRational,
    #[serde(serialize_with = "serialize_ratio")]
    pub bound: BigRational,
    pub holds: bool,
    /// `⌊n^{ε³}⌋`.
    pub k: usize,
}

fn serialize_ratio<S: serde::Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn check_labels(p: &IotaParams, labels: &[usize]) -> Result<()> {
    if labels.len() != p.n() {
        return Err(Error::param(format!("labeling has {} entries for n = {}", labels.len(), p.n())));
    }
    Ok(())
}

/// Computes the exact mass of label-decreasing ι_n edges. Labels must lie in
/// `0..⌊n^{ε³}⌋` unless `allow_wide_labels` is set.
pub fn lemma35_lhs(
    p: &IotaParams,
    labels: &[usize],
    eps: Fraction,
    allow_wide_labels: bool,
) -> Result<LabelingCertificate> {
    check_labels(p, labels)?;
    let k = label_bound(p.n(), eps);
    if !allow_wide_labels {
        if let Some((vertex, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::LabelOutOfRange { vertex, label, bound: k });
        }
    }
    let mass = decreasing_mass(p, labels);
    let bound = BigRational::new(1.into(), 2.into()) + eps.to_big() * BigRational::from_integer(4.into());
    let holds = mass < bound;
    Ok(LabelingCertificate { mass, bound, holds, k })
}

/// Sliding label histograms over the windows `[v, v+2^r)` of ℤ_n.
struct Window {
    counts: Vec<u64>,
}

impl Window {
    fn new(labels: &[usize], start: usize, width: usize, k: usize) -> Self {
        let n = labels.len();
        let mut counts = vec![0u64; k];
        for i in 0..width {
            counts[labels[(start + i) % n]] += 1;
        }
        Window { counts }
    }

    fn slide(&mut self, labels: &[usize], start: usize, width: usize) {
        let n = labels.len();
        self.counts[labels[start % n]] -= 1;
        self.counts[labels[(start + width) % n]] += 1;
    }
}

/// `#{(x, y) ∈ X × Y : l(x) > l(y)}` from the two histograms.
fn decreasing_pairs(x: &[u64], y: &[u64]) -> u128 {
    let mut below = 0u128;
    let mut total = 0u128;
    for (hx, hy) in x.iter().zip(y) {
        total += *hx as u128 * below;
        below += *hy as u128;
    }
    total
}

fn label_range(labels: &[usize]) -> usize {
    labels.iter().copied().max().unwrap_or(0) + 1
}

fn decreasing_mass(p: &IotaParams, labels: &[usize]) -> BigRational {
    let n = p.n();
    let k = label_range(labels);
    let top = p.r_count() as u32 - 1;
    let mut num: u128 = 0;
    for r in 0..p.r_count() {
        let width = 1usize << r;
        let mut x = Window::new(labels, 0, width, k);
        let mut y = Window::new(labels, width, width, k);
        let mut pairs: u128 = 0;
        for v in 0..n {
            if v > 0 {
                x.slide(labels, v - 1, width);
                y.slide(labels, v - 1 + width, width);
            }
            pairs += decreasing_pairs(&x.counts, &y.counts);
        }
        num += pairs * 4u128.pow(top - r as u32);
    }
    big_ratio(num, p.common_denominator())
}

/// The same mass as [`lemma35_lhs`], recomputed as the average over `(v, r)` of
/// the exceedance probability between the empirical laws of `l` on the two
/// halves of each window.
pub fn window_exceedance_mass(p: &IotaParams, labels: &[usize]) -> Result<BigRational> {
    check_labels(p, labels)?;
    let n = p.n();
    let mut total = BigRational::zero();
    for r in 0..p.r_count() {
        let width = 1usize << r;
        for v in 0..n {
            let xs: Vec<usize> = (0..width).map(|i| labels[(v + i) % n]).collect();
            let ys: Vec<usize> = (0..width).map(|i| labels[(v + width + i) % n]).collect();
            let law_x = ExactLaw::empirical(&xs)?;
            let law_y = ExactLaw::empirical(&ys)?;
            total += exceedance_probability(&law_x, &law_y);
        }
    }
    Ok(total / BigRational::from_integer((n * p.r_count()).into()))
}

/// Entropies of `l` on every window `[v, v + 2^r)`, `r ∈ 0..=R(n)`, and the
/// telescoping identity they satisfy.
#[derive(Clone, Debug, Serialize)]
pub struct WindowProfile {
    pub n: usize,
    pub r_count: usize,
    /// `entropies[r][v] = H(X_{v,r})`; `H(Y_{v,r}) = entropies[r][v + 2^r]`.
    pub entropies: Vec<Vec<f64>>,
    /// `E_{v,r}[2H(X_{v,r+1}) − H(X_{v,r}) − H(Y_{v,r})]`.
    pub mean_gap: f64,
    /// `(2/R)·E_v[H(X_{v,R}) − H(X_{v,0})]`.
    pub telescoped: f64,
    pub min_gap: f64,
    /// `2 log₂(k) / R(n)` with `k` the label range.
    pub markov_quantity: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WindowEntry {
    pub v: usize,
    pub r: usize,
    pub h_x: f64,
    pub h_y: f64,
    pub h_joined: f64,
    pub gap: f64,
}

impl WindowProfile {
    pub fn h_x(&self, v: usize, r: usize) -> f64 {
        self.entropies[r][v % self.n]
    }

    pub fn h_y(&self, v: usize, r: usize) -> f64 {
        self.entropies[r][(v + (1 << r)) % self.n]
    }

    /// One row per `(v, r)` with `r < R(n)`.
    pub fn entries(&self) -> impl Iterator<Item = WindowEntry> + '_ {
        (0..self.r_count).flat_map(move |r| {
            (0..self.n).map(move |v| {
                let (h_x, h_y, h_joined) = (self.h_x(v, r), self.h_y(v, r), self.h_x(v, r + 1));
                WindowEntry { v, r, h_x, h_y, h_joined, gap: 2.0 * h_joined - h_x - h_y }
            })
        })
    }

    /// `|mean_gap − telescoped| ≤ tol`.
    pub fn identity_holds(&self, tol: f64) -> bool {
        (self.mean_gap - self.telescoped).abs() <= tol
    }
}

/// Entropy of a histogram over `width` items, maintained as `Σ c log₂ c`.
struct EntropyWindow {
    counts: Vec<u64>,
    c_log_c: f64,
    width: f64,
}

fn c_log_c(c: u64) -> f64 {
    if c == 0 {
        0.0
    } else {
        c as f64 * (c as f64).log2()
    }
}

impl EntropyWindow {
    fn new(labels: &[usize], width: usize, k: usize) -> Self {
        let w = Window::new(labels, 0, width, k);
        let c_log_c = w.counts.iter().map(|&c| c_log_c(c)).sum();
        EntropyWindow { counts: w.counts, c_log_c, width: width as f64 }
    }

    fn bump(&mut self, label: usize, up: bool) {
        let c = self.counts[label];
        self.c_log_c -= c_log_c(c);
        self.counts[label] = if up { c + 1 } else { c - 1 };
        self.c_log_c += c_log_c(self.counts[label]);
    }

    fn entropy(&self) -> f64 {
        (self.width.log2() - self.c_log_c / self.width).max(0.0)
    }
}

pub fn window_entropy_profile(p: &IotaParams, labels: &[usize]) -> Result<WindowProfile> {
    check_labels(p, labels)?;
    let n = p.n();
    let big_r = p.r_count();
    let k = label_range(labels);
    let mut entropies = Vec::with_capacity(big_r + 1);
    for r in 0..=big_r {
        let width = 1usize << r;
        let mut w = EntropyWindow::new(labels, width, k);
        let mut row = Vec::with_capacity(n);
        for v in 0..n {
            if v > 0 {
                w.bump(labels[v - 1], false);
                w.bump(labels[(v - 1 + width) % n], true);
            }
            row.push(w.entropy());
        }
        entropies.push(row);
    }
    let mut profile = WindowProfile {
        n,
        r_count: big_r,
        entropies,
        mean_gap: 0.0,
        telescoped: 0.0,
        min_gap: f64::INFINITY,
        markov_quantity: 2.0 * (k as f64).log2() / big_r as f64,
    };
    let (gap_sum, min_gap) =
        profile.entries().fold((0.0, f64::INFINITY), |(sum, min), e| (sum + e.gap, f64::min(min, e.gap)));
    profile.min_gap = min_gap;
    profile.mean_gap = gap_sum / (n * big_r) as f64;
    let spread: f64 = (0..n).map(|v| profile.entropies[big_r][v] - profile.entropies[0][v]).sum();
    profile.telescoped = 2.0 / big_r as f64 * spread / n as f64;
    Ok(profile)
}

/// `2^{H(1/d)·dn} · (1/2 + 4ε)^{(d−1)n}`, carried in log space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdmissionBound {
    pub log2_value: f64,
    /// `2^log2_value`; may be `inf`.
    pub value: f64,
}

impl AdmissionBound {
    pub fn capped(&self) -> f64 {
        self.value.min(1.0)
    }
}

pub fn prop_c_bound(n: usize, d: usize, eps: f64) -> Result<AdmissionBound> {
    if d < 3 {
        return Err(Error::param(format!("d must be at least 3, got {d}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("epsilon {eps} must lie in (0, 1)")));
    }
    let h = binary_entropy(1.0 / d as f64)?;
    let log2_value = h * (d * n) as f64 + ((d - 1) * n) as f64 * (0.5 + 4.0 * eps).log2();
    Ok(AdmissionBound { log2_value, value: log2_value.exp2() })
}

#[derive(Clone, Debug, Serialize)]
pub struct AdmissionReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub bound: AdmissionBound,
    /// Frequency of draws admitting an `(ε, k)`-depth function, with bound
    /// `min(1, bound)`.
    pub rate: EventEstimate,
}

/// Fraction of G_n^d samples (trial `i` seeded by `trial_rng(seed, i)`) that
/// admit an `(ε, ⌊n^{ε³}⌋)`-depth function, decided exhaustively.
pub fn depth_admission_experiment(
    n: usize,
    d: usize,
    eps: Fraction,
    trials: usize,
    seed: u64,
    budget: u128,
) -> Result<AdmissionReport> {
    if trials == 0 {
        return Err(Error::param("trials must be at least 1"));
    }
    let bound = prop_c_bound(n, d, eps.to_f64())?;
    let cfg = GndConfig::new(n, d, seed)?;
    let k = label_bound(n, eps);
    let params = DepthParams::new(eps, k)?;
    let admitted: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let raw = generate_gnd_with(&cfg, &mut trial_rng(seed, i as u64));
            admits_depth_function(&raw.graph, &params, budget)
        })
        .collect::<Result<_>>()?;
    let hits = admitted.iter().filter(|&&a| a).count();
    Ok(AdmissionReport { n, d, k, bound, rate: EventEstimate::new(hits, trials, bound.capped()) })
}
