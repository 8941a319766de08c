//! Experiment configuration: a pipeline name, a flat parameter map, a master
//! seed and an output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize};

use extender_core::Fraction;

use crate::error::{io_error, CliError, Result};

pub const SEED_ENV: &str = "EXTENDER_SEED";
pub const OUT_DIR_ENV: &str = "EXTENDER_OUT_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default, deserialize_with = "scalar_map")]
    pub params: BTreeMap<String, String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Accepts numbers, booleans and strings as parameter values.
fn scalar_map<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<String, String>, D::Error> {
    let raw = BTreeMap::<String, serde_json::Value>::deserialize(d)?;
    raw.into_iter()
        .map(|(k, v)| match v {
            serde_json::Value::String(s) => Ok((k, s)),
            serde_json::Value::Number(n) => Ok((k, n.to_string())),
            serde_json::Value::Bool(b) => Ok((k, b.to_string())),
            other => Err(serde::de::Error::custom(format!("parameter {k} has non-scalar value {other}"))),
        })
        .collect()
}

impl ExperimentConfig {
    pub fn new(experiment: impl Into<String>) -> Self {
        ExperimentConfig { experiment: experiment.into(), params: BTreeMap::new(), seed: 0, out_dir: default_out_dir() }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_error(path))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column())))
    }

    /// Parses `key=value` overrides.
    pub fn apply_overrides<'a>(&mut self, pairs: impl IntoIterator<Item = &'a str>) -> Result<()> {
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("parameter {pair:?} is not of the form key=value")))?;
            self.params.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(())
    }
}

/// Parameters of one pipeline after defaults are filled in and unknown keys
/// rejected.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Params {
    #[serde(skip)]
    pipeline: &'static str,
    values: BTreeMap<String, String>,
}

impl Params {
    pub fn resolve(
        pipeline: &'static str,
        defaults: &[(&'static str, &'static str)],
        given: &BTreeMap<String, String>,
    ) -> Result<Self> {
        if let Some(unknown) = given.keys().find(|k| !defaults.iter().any(|(d, _)| d == k)) {
            let known: Vec<&str> = defaults.iter().map(|(k, _)| *k).collect();
            return Err(CliError::Config(format!(
                "unknown parameter {unknown:?} for pipeline {pipeline}; expected one of: {}",
                known.join(", ")
            )));
        }
        let values = defaults
            .iter()
            .map(|(k, v)| (k.to_string(), given.get(*k).cloned().unwrap_or_else(|| v.to_string())))
            .collect();
        Ok(Params { pipeline, values })
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    fn parse<T: FromStr>(&self, key: &str, what: &str) -> Result<T> {
        let raw = self.values.get(key).expect("declared parameter");
        raw.parse().map_err(|_| {
            CliError::Config(format!("parameter {key}={raw:?} for pipeline {} must be {what}", self.pipeline))
        })
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        self.parse(key, "a non-negative integer")
    }

    pub fn u64(&self, key: &str) -> Result<u64> {
        self.parse(key, "a non-negative integer")
    }

    pub fn u128(&self, key: &str) -> Result<u128> {
        self.parse(key, "a non-negative integer")
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        self.parse(key, "a number")
    }

    /// Exact decimal or `p/q`.
    pub fn fraction(&self, key: &str) -> Result<Fraction> {
        self.parse(key, "a decimal or p/q fraction")
    }

    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let raw = self.values.get(key).expect("declared parameter");
        raw.split(',').map(|s| s.trim().parse()).collect::<std::result::Result<_, _>>().map_err(|_| {
            CliError::Config(format!(
                "parameter {key}={raw:?} for pipeline {} must be a comma-separated integer list",
                self.pipeline
            ))
        })
    }
}
