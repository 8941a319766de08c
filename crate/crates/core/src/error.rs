use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(usize),

    #[error("vertex {vertex} out of range for a graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("vertex set over {got} vertices used with a graph on {expected} vertices")]
    UniverseMismatch { expected: usize, got: usize },

    #[error("operation requires an acyclic graph")]
    Cyclic,

    #[error("removed set must be a proper subset of the vertex set")]
    ImproperSubset,

    #[error("edge ({0}, {1}) is not an edge of the carrier graph")]
    ForeignEdge(usize, usize),

    #[error("edge ({0}, {1}) is not increasing")]
    NonIncreasingEdge(usize, usize),

    #[error("level vector is not a depth function (vertex {vertex})")]
    NotADepthFunction { vertex: usize },

    #[error("search space of {required} exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("label {label} at vertex {vertex} is outside 0..{bound}")]
    LabelOutOfRange { vertex: usize, label: usize, bound: usize },

    #[error("divergence undefined: outcome {0} has positive mass only in the first law")]
    Domain(usize),

    #[error("cleanup removed every vertex")]
    EmptyResult,

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
