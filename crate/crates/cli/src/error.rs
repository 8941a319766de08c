use std::path::PathBuf;

use extender_core::Error as CoreError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown pipeline {0:?}; expected one of: {1}")]
    UnknownPipeline(String, String),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    /// Stable machine-readable code printed before the message.
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                CoreError::Parse(_) => "E_PARSE",
                CoreError::Cyclic => "E_CYCLIC",
                CoreError::BudgetExceeded { .. } => "E_BUDGET",
                CoreError::InvalidParameter(_) | CoreError::Domain(_) => "E_PARAM",
                CoreError::EmptyGraph
                | CoreError::SelfLoop(_)
                | CoreError::VertexOutOfRange { .. }
                | CoreError::ForeignEdge(..)
                | CoreError::NonIncreasingEdge(..) => "E_GRAPH",
                CoreError::InvalidCircuit(_) => "E_CIRCUIT",
                _ => "E_INPUT",
            },
            CliError::Io { .. } => "E_IO",
            CliError::Csv(_) => "E_IO",
            CliError::UnknownPipeline(..) => "E_PIPELINE",
            CliError::Config(_) => "E_CONFIG",
        }
    }

    /// `error: CODE: message` on a single line.
    pub fn render(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error: {}: {msg}", self.code())
    }
}

pub(crate) fn io_error(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
    let path = path.into();
    move |source| CliError::Io { path, source }
}
