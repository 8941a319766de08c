//! Argument parsing and subcommand handlers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use extender_core::dag::{codepth, has_increasing_edges, longest_path_avoiding, topological_relabel};
use extender_core::depth::{
    enumerate_depth_functions, first_violation, is_depth_function, is_eps_rho_depth_function, DepthFunction,
    DepthParams, DEFAULT_ENUMERATION_BUDGET,
};
use extender_core::extender::{
    decide_extender_bruteforce, min_codepth_attack, AttackStrategy, ExtenderParams, DEFAULT_SUBSET_BUDGET,
};
use extender_core::io::{graph_from_json, graph_to_dot, graph_to_json};
use extender_core::random_graphs::{cleanup_to_hn, generate_gnd, CleanupConfig, GndConfig};
use extender_core::shallowing::{build_separator, build_separator_for_target, verify_shallowing};
use extender_core::{Dag, Fraction, VertexSet};

use crate::config::{ExperimentConfig, OUT_DIR_ENV, SEED_ENV};
use crate::error::{io_error, CliError, Result};
use crate::pipelines::run_pipeline;

#[derive(Parser, Debug)]
#[command(name = "extender", version, about = "Extender and hypershallow DAG experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample G_n^d, optionally cleaned to H_n.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Degree cap Δ; when given, output H_n instead of G_n^d.
        #[arg(long)]
        cleanup: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Longest path avoiding a vertex set.
    Codepth {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated vertices to remove.
        #[arg(long, default_value = "")]
        remove: String,
    },
    /// Check a depth function, or enumerate (ε, ρ)-depth functions.
    Depthfn {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: Fraction,
        #[arg(long)]
        rho: usize,
        /// File holding a JSON level array (-1 for ∞) to check instead of enumerating.
        #[arg(long)]
        check: Option<PathBuf>,
        /// Stop after this many functions.
        #[arg(long, default_value_t = 1)]
        limit: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
    },
    /// Exact (ε, ρ)-extender decision by subset enumeration.
    VerifyExtender {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        eps: Fraction,
        #[arg(long)]
        rho: usize,
        #[arg(long, default_value_t = DEFAULT_SUBSET_BUDGET)]
        budget: u128,
    },
    /// Heuristic search for a small set leaving short paths only.
    Attack {
        #[arg(long)]
        input: PathBuf,
        /// Removal budget as a fraction of the vertex count.
        #[arg(long)]
        eps: Fraction,
        #[arg(long, value_enum, default_value_t = Strategy::Greedy)]
        strategy: Strategy,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Exact labeling certificates on ℤ_n.
    Lemma35 {
        #[arg(long, default_value_t = 256)]
        n: usize,
        #[arg(long, default_value = "0.5")]
        eps: Fraction,
        /// Number of random labelings besides the adversarial ones.
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long)]
        allow_wide: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Build and verify a shallowing separator.
    Shallow {
        #[arg(long)]
        eps: Fraction,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Treat eps as the target |S|/m and rescale by the max indegree.
        #[arg(long)]
        target: bool,
    },
    /// Fraction of G_n^d samples admitting an (ε, ⌊n^{ε³}⌋)-depth function.
    Admission {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long)]
        eps: Fraction,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
        budget: u128,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Circuit experiments.
    Circuits {
        #[command(subcommand)]
        command: CircuitCommand,
    },
    /// Run a registered pipeline and write its report bundle.
    Report {
        /// Pipeline name; overrides the config file's experiment.
        #[arg(long)]
        pipeline: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Parameter override `key=value`; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Subcommand, Debug)]
pub enum CircuitCommand {
    /// Exhaustive search for depth-1 advice circuits computing shift_n.
    ShiftSearch {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: Fraction,
        #[arg(long)]
        indeg: usize,
        #[arg(long, default_value_t = 4)]
        advice_cap: usize,
        #[arg(long, default_value_t = 1 << 40)]
        budget: u128,
        #[arg(long, default_value_t = extender_core::circuits::DEFAULT_NODE_LIMIT)]
        node_limit: u64,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Strategy {
    Greedy,
    Random,
}

#[derive(Args, Debug)]
pub struct SeedArg {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long, env = SEED_ENV)]
    pub seed: Option<u64>,
    #[arg(long, env = OUT_DIR_ENV)]
    pub out_dir: Option<PathBuf>,
}

impl RunArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(dir) = &self.out_dir {
            cfg.out_dir = dir.clone();
        }
    }
}

fn read_graph(path: &Path) -> Result<Dag> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    Ok(graph_from_json(&text)?)
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(io_error(path)),
        None => {
            use std::io::Write;
            match writeln!(std::io::stdout().lock(), "{}", text.trim_end()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(io_error(Path::new("<stdout>"))(e)),
                _ => Ok(()),
            }
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn parse_vertices(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::Config(format!("{s:?} is not a vertex id"))))
        .collect()
}

/// Runs a pipeline, writes its bundle and returns the file summary line.
fn run_and_write(cfg: &ExperimentConfig) -> Result<String> {
    let bundle = run_pipeline(cfg)?;
    bundle.write(&cfg.out_dir)?;
    let names: Vec<&str> = bundle.names().collect();
    Ok(format!("{}: wrote {} to {}", cfg.experiment, names.join(", "), cfg.out_dir.display()))
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { n, d, seed, cleanup, out, dot } => {
            let raw = generate_gnd(&GndConfig::new(n, d, seed.seed)?);
            let g = match cleanup {
                Some(delta) => cleanup_to_hn(&raw.graph, &CleanupConfig::new(delta)?)?.graph,
                None => raw.graph,
            };
            if let Some(path) = dot {
                std::fs::write(&path, graph_to_dot(&g, "g")).map_err(io_error(&path))?;
            }
            write_or_print(out.as_deref(), &(graph_to_json(&g) + "\n"))
        }
        Command::Codepth { input, remove } => {
            let g = read_graph(&input)?;
            let s = VertexSet::from_vertices(g.vertex_count(), parse_vertices(&remove)?)?;
            let depth = codepth(&g, &s)?;
            let path = longest_path_avoiding(&g, &s)?;
            write_or_print(None, &to_json(&serde_json::json!({ "codepth": depth, "path": path })))
        }
        Command::Depthfn { input, eps, rho, check, limit, budget } => {
            let g = read_graph(&input)?;
            let p = DepthParams::new(eps, rho)?;
            let out = match check {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(io_error(&path))?;
                    let f: DepthFunction = serde_json::from_str(&text).map_err(|e| {
                        extender_core::Error::Parse(format!("line {} column {}: {e}", e.line(), e.column()))
                    })?;
                    if f.len() != g.vertex_count() {
                        return Err(CliError::Config(format!(
                            "depth function has {} levels for {} vertices",
                            f.len(),
                            g.vertex_count()
                        )));
                    }
                    serde_json::json!({
                        "is_depth_function": is_depth_function(&g, &f),
                        "is_eps_rho_depth_function": is_eps_rho_depth_function(&g, &f, &p),
                        "first_violation": first_violation(&g, &f),
                    })
                }
                None => {
                    let found: Vec<DepthFunction> = enumerate_depth_functions(&g, &p, budget)?.take(limit).collect();
                    serde_json::json!({ "admits": !found.is_empty(), "functions": found })
                }
            };
            write_or_print(None, &to_json(&out))
        }
        Command::VerifyExtender { input, eps, rho, budget } => {
            let g = read_graph(&input)?;
            let verdict = decide_extender_bruteforce(&g, &ExtenderParams::new(eps, rho)?, budget)?;
            write_or_print(None, &to_json(&verdict))
        }
        Command::Attack { input, eps, strategy, restarts, seed } => {
            let g = read_graph(&input)?;
            let m = g.vertex_count();
            let budget = (eps.floor_times(m as u64) as usize).min(m - 1);
            let strategy = match strategy {
                Strategy::Greedy => AttackStrategy::Greedy,
                Strategy::Random => AttackStrategy::RandomRestarts { restarts, seed: seed.seed },
            };
            let result = min_codepth_attack(&g, budget, strategy)?;
            write_or_print(None, &to_json(&result))
        }
        Command::Lemma35 { n, eps, random, allow_wide, run } => {
            let mut cfg = ExperimentConfig::new("lemma35")
                .with_param("n", n)
                .with_param("eps", eps)
                .with_param("random", random)
                .with_param("allow_wide", allow_wide);
            run.apply(&mut cfg);
            write_or_print(None, &run_and_write(&cfg)?)?;
            Ok(())
        }
        Command::Shallow { eps, input, out, target } => {
            let g = read_graph(&input)?;
            let (work, perm) = if has_increasing_edges(&g) {
                (g.clone(), None)
            } else {
                let (h, perm) = topological_relabel(&g)?;
                (h, Some(perm))
            };
            let r = if target { build_separator_for_target(&work, eps)? } else { build_separator(&work, eps)? };
            let v = verify_shallowing(&work, &r, r.epsilon)?;
            let separator: Vec<usize> = match &perm {
                Some(perm) => {
                    let mut inverse = vec![0; perm.len()];
                    for (old, &new) in perm.iter().enumerate() {
                        inverse[new] = old;
                    }
                    let mut s: Vec<usize> = r.separator.iter().map(|&x| inverse[x]).collect();
                    s.sort_unstable();
                    s
                }
                None => r.separator.clone(),
            };
            let doc = serde_json::json!({
                "epsilon": r.epsilon,
                "relabelled": perm.is_some(),
                "c": r.scale.c,
                "scale_index": r.scale.index,
                "A": r.stride,
                "B": r.width,
                "class_edges": r.class_edges.len(),
                "S": separator,
                "size": v.size,
                "size_bound": v.size_bound,
                "size_ok": v.size_ok,
                "bound": v.certified_bound,
                "codepth": v.codepth,
                "codepth_ok": v.codepth_ok,
            });
            write_or_print(out.as_deref(), &to_json(&doc))
        }
        Command::Admission { n, d, eps, trials, budget, run } => {
            let mut cfg = ExperimentConfig::new("admission")
                .with_param("n", n)
                .with_param("d", d)
                .with_param("eps", eps)
                .with_param("trials", trials)
                .with_param("budget", budget);
            run.apply(&mut cfg);
            write_or_print(None, &run_and_write(&cfg)?)?;
            Ok(())
        }
        Command::Circuits {
            command: CircuitCommand::ShiftSearch { n, eps, indeg, advice_cap, budget, node_limit, run },
        } => {
            let mut cfg = ExperimentConfig::new("shift-search")
                .with_param("n", n)
                .with_param("eps", eps)
                .with_param("indeg", indeg)
                .with_param("advice_cap", advice_cap)
                .with_param("budget", budget)
                .with_param("node_limit", node_limit);
            run.apply(&mut cfg);
            write_or_print(None, &run_and_write(&cfg)?)?;
            Ok(())
        }
        Command::Report { pipeline, config, params, run } => {
            let mut cfg = match (&config, &pipeline) {
                (Some(path), _) => ExperimentConfig::load(path)?,
                (None, Some(name)) => ExperimentConfig::new(name.clone()),
                (None, None) => return Err(CliError::Config("report needs --pipeline or --config".into())),
            };
            if let Some(name) = pipeline {
                cfg.experiment = name;
            }
            cfg.apply_overrides(params.iter().map(String::as_str))?;
            run.apply(&mut cfg);
            write_or_print(None, &run_and_write(&cfg)?)?;
            Ok(())
        }
    }
}
