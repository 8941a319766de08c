//! Report bundles: named JSON, CSV and DOT files plus a run manifest.

use std::collections::BTreeMap;
use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;

use extender_core::fraction::big_to_f64;

use crate::config::Params;
use crate::error::{io_error, Result};

/// An exact rational next to its decimal value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: f64,
}

impl From<&BigRational> for Exact {
    fn from(v: &BigRational) -> Self {
        Exact { exact: v.to_string(), decimal: big_to_f64(v) }
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    pipeline: &'a str,
    seed: u64,
    params: &'a BTreeMap<String, String>,
    versions: BTreeMap<&'static str, &'static str>,
}

/// Files of one pipeline run, keyed by file name. Writing is deterministic:
/// same inputs give byte-identical files.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReportBundle {
    files: BTreeMap<String, Vec<u8>>,
}

impl ReportBundle {
    pub fn new(pipeline: &str, seed: u64, params: &Params) -> Self {
        let manifest = Manifest {
            pipeline,
            seed,
            params: params.values(),
            versions: BTreeMap::from([
                ("extender-cli", env!("CARGO_PKG_VERSION")),
                ("extender-core", extender_core::VERSION),
            ]),
        };
        let mut b = ReportBundle::default();
        b.add_json("manifest.json", &manifest);
        b
    }

    pub fn add_json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) {
        let mut text = serde_json::to_vec_pretty(value).expect("report serializes");
        text.push(b'\n');
        self.files.insert(name.to_string(), text);
    }

    pub fn add_csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<()> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        self.files.insert(name.to_string(), bytes);
        Ok(())
    }

    pub fn add_text(&mut self, name: &str, text: String) {
        self.files.insert(name.to_string(), text.into_bytes());
    }

    pub fn file(&self, name: &str) -> Option<&[u8]> {
        self.files.get(name).map(Vec::as_slice)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.keys().map(String::as_str)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(io_error(dir))?;
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(io_error(&path))?;
        }
        Ok(())
    }
}
