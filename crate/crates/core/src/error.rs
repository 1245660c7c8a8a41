use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),
    #[error("induced subgraph on qubits {0:?} is not connected")]
    DisconnectedSubgraph(Vec<usize>),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("{what} of size {size} exceeds the supported limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("non-Clifford or unsupported gate `{0}`")]
    NonCliffordGate(String),
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("counts are empty")]
    EmptyCounts,
    #[error("bitstring width {actual} does not match expected width {expected}")]
    WidthMismatch { expected: usize, actual: usize },
    #[error("no coupler path between hardware qubits {0} and {1}")]
    NoPath(usize, usize),
    #[error("witness expects {expected} expectation values, got {actual}")]
    WrongArity { expected: usize, actual: usize },
    #[error("({0}, {1}) is not an edge of the prepared graph")]
    NotAnEdge(usize, usize),
    #[error("assignment matrix for qubit {qubit} is singular (det = {det})")]
    SingularCalibration { qubit: usize, det: f64 },
    #[error("group of {size} circuits exceeds batch limit {limit}")]
    GroupTooLarge { size: usize, limit: usize },
    #[error("series is constant")]
    ConstantSeries,
    #[error("need at least {needed} samples, got {actual}")]
    TooFewSamples { needed: usize, actual: usize },
    #[error("empty input")]
    Empty,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors caused by bad user input (files, flags, configs) rather than
    /// failures while running.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidTopology(_)
                | Error::InvalidConfig(_)
                | Error::InvalidEdge(..)
                | Error::DisconnectedSubgraph(_)
                | Error::Parse(_)
                | Error::Json(_)
                | Error::VertexOutOfRange { .. }
                | Error::NonCliffordGate(_)
        ) || matches!(self, Error::Io(e) if e.kind() == std::io::ErrorKind::NotFound)
    }
}
