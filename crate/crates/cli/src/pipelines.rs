//! Registered experiment pipelines.

use rand::Rng;
use serde::Serialize;

use extender_core::circuits::{search_depth1_advice_shift, SearchStatus};
use extender_core::dag::{degree_stats, is_acyclic};
use extender_core::extender::{
    depth_admission_experiment, label_bound, lemma35_lhs, min_codepth_attack, window_entropy_profile,
    window_exceedance_mass, AttackStrategy,
};
use extender_core::io::{graph_to_dot, graph_to_json};
use extender_core::random_graphs::{
    cleanup_to_hn, generate_gnd_with, random_increasing_dag, tail_experiment, trial_rng, CleanupConfig, EventEstimate,
    GndConfig, IotaParams,
};
use extender_core::shallowing::{build_separator, verify_shallowing};
use extender_core::Fraction;

use crate::config::{ExperimentConfig, Params};
use crate::error::{CliError, Result};
use crate::report::{Exact, ReportBundle};

type Defaults = &'static [(&'static str, &'static str)];

pub struct Pipeline {
    pub name: &'static str,
    pub defaults: Defaults,
    run: fn(&Params, u64) -> Result<ReportBundle>,
}

pub const PIPELINES: &[Pipeline] = &[
    Pipeline {
        name: "gnd-tails",
        defaults: &[("n", "4096"), ("d", "3"), ("delta", "10"), ("eps", "0.1"), ("trials", "1000")],
        run: gnd_tails,
    },
    Pipeline { name: "hn-build", defaults: &[("n", "1024"), ("d", "3"), ("delta", "10")], run: hn_build },
    Pipeline {
        name: "extender-attack",
        defaults: &[
            ("log_n", "8,9,10,11,12,13"),
            ("d", "3"),
            ("delta", "10"),
            ("eps", "0.1"),
            ("restarts", "4"),
            ("reference_exponent", "0.019"),
        ],
        run: extender_attack,
    },
    Pipeline {
        name: "lemma35",
        defaults: &[("n", "256"), ("eps", "0.5"), ("random", "100"), ("allow_wide", "false"), ("cross_check", "true")],
        run: lemma35,
    },
    Pipeline { name: "shallow", defaults: &[("m", "10000"), ("d", "3"), ("eps", "0.1")], run: shallow },
    Pipeline {
        name: "admission",
        defaults: &[("n", "8"), ("d", "3"), ("eps", "0.1"), ("trials", "100"), ("budget", "4294967296")],
        run: admission,
    },
    Pipeline {
        name: "shift-search",
        defaults: &[
            ("n", "2"),
            ("eps", "0"),
            ("indeg", "1"),
            ("advice_cap", "4"),
            ("budget", "1099511627776"),
            ("node_limit", "65536"),
        ],
        run: shift_search,
    },
];

pub fn find_pipeline(name: &str) -> Result<&'static Pipeline> {
    PIPELINES.iter().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<&str> = PIPELINES.iter().map(|p| p.name).collect();
        CliError::UnknownPipeline(name.to_string(), names.join(", "))
    })
}

/// Validates the configuration and runs the named pipeline.
pub fn run_pipeline(cfg: &ExperimentConfig) -> Result<ReportBundle> {
    let pipeline = find_pipeline(&cfg.experiment)?;
    let params = Params::resolve(pipeline.name, pipeline.defaults, &cfg.params)?;
    (pipeline.run)(&params, cfg.seed)
}

fn flag(p: &Params, key: &str) -> Result<bool> {
    match p.values()[key].as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(CliError::Config(format!("parameter {key}={other:?} must be true or false"))),
    }
}

#[derive(Serialize)]
struct EventRow<'a> {
    event: &'a str,
    hits: usize,
    trials: usize,
    frequency: f64,
    sigma: f64,
    bound: f64,
    within_3_sigma: bool,
}

impl<'a> EventRow<'a> {
    fn new(event: &'a str, e: &EventEstimate) -> Self {
        EventRow {
            event,
            hits: e.hits,
            trials: e.trials,
            frequency: e.frequency,
            sigma: e.sigma,
            bound: e.bound,
            within_3_sigma: e.within(3.0),
        }
    }
}

fn gnd_tails(p: &Params, seed: u64) -> Result<ReportBundle> {
    let cfg = GndConfig::new(p.usize("n")?, p.usize("d")?, seed)?;
    let cleanup = CleanupConfig::new(p.usize("delta")?)?;
    let report = tail_experiment(&cfg, &cleanup, p.fraction("eps")?, p.usize("trials")?)?;
    let mut b = ReportBundle::new("gnd-tails", seed, p);
    b.add_json("results.json", &report);
    b.add_csv(
        "gnd-tails.csv",
        &[EventRow::new("high_degree", &report.high_degree), EventRow::new("backward_edges", &report.backward_edges)],
    )?;
    Ok(b)
}

#[derive(Serialize)]
struct HnSummary {
    n: usize,
    d: usize,
    delta: usize,
    raw_edges: usize,
    removed: usize,
    high_degree: usize,
    backward_sources: usize,
    vertices: usize,
    edges: usize,
    acyclic: bool,
    max_degree: usize,
}

#[derive(Serialize)]
struct DegreeRow {
    degree: usize,
    count: usize,
}

fn hn_build(p: &Params, seed: u64) -> Result<ReportBundle> {
    let cfg = GndConfig::new(p.usize("n")?, p.usize("d")?, seed)?;
    let cleanup_cfg = CleanupConfig::new(p.usize("delta")?)?;
    let raw = generate_gnd_with(&cfg, &mut trial_rng(seed, 0));
    let clean = cleanup_to_hn(&raw.graph, &cleanup_cfg)?;
    let h = &clean.graph;
    let stats = degree_stats(h);
    let summary = HnSummary {
        n: cfg.n,
        d: cfg.d,
        delta: cleanup_cfg.delta,
        raw_edges: raw.graph.edge_count(),
        removed: clean.removed.len(),
        high_degree: clean.high_degree,
        backward_sources: clean.backward_sources,
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        acyclic: is_acyclic(h),
        max_degree: stats.max_deg,
    };
    let mut hist = vec![0usize; stats.max_deg + 1];
    for &deg in &stats.deg {
        hist[deg] += 1;
    }
    let rows: Vec<DegreeRow> =
        hist.into_iter().enumerate().map(|(degree, count)| DegreeRow { degree, count }).collect();
    let mut b = ReportBundle::new("hn-build", seed, p);
    b.add_json("results.json", &summary);
    b.add_csv("degrees.csv", &rows)?;
    b.add_text("gnd.json", graph_to_json(&raw.graph) + "\n");
    b.add_text("hn.json", graph_to_json(h) + "\n");
    b.add_text("hn.dot", graph_to_dot(h, "hn"));
    Ok(b)
}

#[derive(Serialize)]
struct AttackRow {
    n: usize,
    vertices: usize,
    budget: usize,
    greedy_codepth: usize,
    random_codepth: usize,
    min_codepth: usize,
    reference: f64,
}

fn extender_attack(p: &Params, seed: u64) -> Result<ReportBundle> {
    let d = p.usize("d")?;
    let cleanup_cfg = CleanupConfig::new(p.usize("delta")?)?;
    let eps = p.fraction("eps")?;
    let restarts = p.usize("restarts")?;
    let exponent = p.f64("reference_exponent")?;
    let mut rows = Vec::new();
    for log_n in p.usize_list("log_n")? {
        if !(1..=24).contains(&log_n) {
            return Err(CliError::Config(format!("log_n entry {log_n} must lie in 1..=24")));
        }
        let n = 1usize << log_n;
        let cfg = GndConfig::new(n, d, seed)?;
        let raw = generate_gnd_with(&cfg, &mut trial_rng(seed, log_n as u64));
        let h = cleanup_to_hn(&raw.graph, &cleanup_cfg)?.graph;
        let m = h.vertex_count();
        let budget = (eps.floor_times(m as u64) as usize).min(m - 1);
        let greedy = min_codepth_attack(&h, budget, AttackStrategy::Greedy)?;
        let random = min_codepth_attack(&h, budget, AttackStrategy::RandomRestarts { restarts, seed })?;
        rows.push(AttackRow {
            n,
            vertices: m,
            budget,
            greedy_codepth: greedy.codepth,
            random_codepth: random.codepth,
            min_codepth: greedy.codepth.min(random.codepth),
            reference: (n as f64).powf(exponent),
        });
    }
    let mut b = ReportBundle::new("extender-attack", seed, p);
    b.add_json("results.json", &rows);
    b.add_csv("extender-attack.csv", &rows)?;
    Ok(b)
}

#[derive(Serialize)]
struct LabelingRow {
    labeling: String,
    mass: String,
    mass_decimal: f64,
    bound: String,
    bound_decimal: f64,
    holds: bool,
    window_mass_agrees: Option<bool>,
    identity_error: f64,
}

/// Binary labelings that concentrate decreasing pairs: halves in both
/// orders, then alternating blocks of size `2^j`.
pub fn adversarial_labelings(n: usize) -> Vec<(String, Vec<usize>)> {
    let mut out = vec![
        ("high_then_low".to_string(), (0..n).map(|v| usize::from(v < n / 2)).collect()),
        ("low_then_high".to_string(), (0..n).map(|v| usize::from(v >= n / 2)).collect()),
    ];
    for j in 0..8 {
        out.push((format!("alternating_{j}"), (0..n).map(|v| 1 - ((v >> j) & 1)).collect()));
    }
    out
}

fn lemma35(p: &Params, seed: u64) -> Result<ReportBundle> {
    let n = p.usize("n")?;
    let eps = p.fraction("eps")?;
    let allow_wide = flag(p, "allow_wide")?;
    let cross_check = flag(p, "cross_check")?;
    let iota = IotaParams::new(n)?;
    let k = label_bound(n, eps);
    if k < 2 && !allow_wide {
        return Err(CliError::Config(format!(
            "k = floor(n^(eps^3)) = {k} leaves only constant labelings; raise eps or set allow_wide=true"
        )));
    }
    let range = k.max(2);
    let mut labelings = adversarial_labelings(n);
    for i in 0..p.usize("random")? {
        let mut rng = trial_rng(seed, i as u64);
        labelings.push((format!("random_{i}"), (0..n).map(|_| rng.random_range(0..range)).collect()));
    }
    let mut rows = Vec::with_capacity(labelings.len());
    for (name, labels) in &labelings {
        let cert = lemma35_lhs(&iota, labels, eps, allow_wide)?;
        let window_mass_agrees =
            if cross_check { Some(window_exceedance_mass(&iota, labels)? == cert.mass) } else { None };
        let profile = window_entropy_profile(&iota, labels)?;
        let mass = Exact::from(&cert.mass);
        let bound = Exact::from(&cert.bound);
        rows.push(LabelingRow {
            labeling: name.clone(),
            mass: mass.exact,
            mass_decimal: mass.decimal,
            bound: bound.exact,
            bound_decimal: bound.decimal,
            holds: cert.holds,
            window_mass_agrees,
            identity_error: (profile.mean_gap - profile.telescoped).abs(),
        });
    }
    let mut b = ReportBundle::new("lemma35", seed, p);
    b.add_json("results.json", &serde_json::json!({ "n": n, "k": k, "labelings": rows }));
    b.add_csv("lemma35.csv", &rows)?;
    Ok(b)
}

/// One summary line of a shallowing run.
#[derive(Serialize)]
pub struct ShallowSummary {
    m: usize,
    max_indegree: usize,
    epsilon: Fraction,
    scale_index: usize,
    c: Fraction,
    class_edges: usize,
    stride: u64,
    width: u64,
    separator_size: usize,
    size_bound: f64,
    size_ok: bool,
    codepth: usize,
    certified_bound: f64,
    codepth_ok: bool,
}

pub fn shallow_summary(g: &extender_core::Dag, eps: Fraction) -> Result<(ShallowSummary, Vec<usize>)> {
    let r = build_separator(g, eps)?;
    let v = verify_shallowing(g, &r, eps)?;
    Ok((
        ShallowSummary {
            m: r.m,
            max_indegree: r.max_indegree,
            epsilon: eps,
            scale_index: r.scale.index,
            c: r.scale.c,
            class_edges: r.class_edges.len(),
            stride: r.stride,
            width: r.width,
            separator_size: v.size,
            size_bound: v.size_bound,
            size_ok: v.size_ok,
            codepth: v.codepth,
            certified_bound: v.certified_bound,
            codepth_ok: v.codepth_ok,
        },
        r.separator,
    ))
}

fn shallow(p: &Params, seed: u64) -> Result<ReportBundle> {
    let g = random_increasing_dag(p.usize("m")?, p.usize("d")?, seed)?;
    let (row, separator) = shallow_summary(&g, p.fraction("eps")?)?;
    let mut b = ReportBundle::new("shallow", seed, p);
    b.add_json("results.json", &serde_json::json!({ "summary": &row, "separator": separator }));
    b.add_csv("shallow.csv", &[row])?;
    Ok(b)
}

fn admission(p: &Params, seed: u64) -> Result<ReportBundle> {
    let report = depth_admission_experiment(
        p.usize("n")?,
        p.usize("d")?,
        p.fraction("eps")?,
        p.usize("trials")?,
        seed,
        p.u128("budget")?,
    )?;
    let mut b = ReportBundle::new("admission", seed, p);
    b.add_json("results.json", &report);
    b.add_csv("admission.csv", &[EventRow::new("admits_depth_function", &report.rate)])?;
    Ok(b)
}

#[derive(Serialize)]
struct ShiftRow {
    advice_bits: usize,
    wiring_patterns: String,
    search_space: String,
    status: SearchStatus,
    patterns_checked: String,
    patterns_undecided: String,
}

fn shift_search(p: &Params, seed: u64) -> Result<ReportBundle> {
    let report = search_depth1_advice_shift(
        p.usize("n")?,
        p.fraction("eps")?,
        p.usize("indeg")?,
        p.usize("advice_cap")?,
        p.u128("budget")?,
        p.u64("node_limit")?,
    )?;
    let rows: Vec<ShiftRow> = report
        .configs
        .iter()
        .map(|c| ShiftRow {
            advice_bits: c.advice_bits,
            wiring_patterns: c.wiring_patterns.to_string(),
            search_space: c.search_space.to_string(),
            status: c.status,
            patterns_checked: c.patterns_checked.to_string(),
            patterns_undecided: c.patterns_undecided.to_string(),
        })
        .collect();
    let mut b = ReportBundle::new("shift-search", seed, p);
    b.add_json("results.json", &report);
    b.add_csv("shift-search.csv", &rows)?;
    Ok(b)
}
