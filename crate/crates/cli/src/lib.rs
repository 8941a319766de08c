//! Command-line surface for the `extender-core` library: graph tools,
//! seeded experiment pipelines and deterministic report bundles.

pub mod cli;
pub mod config;
pub mod error;
pub mod pipelines;
pub mod report;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use pipelines::run_pipeline;
pub use report::ReportBundle;
