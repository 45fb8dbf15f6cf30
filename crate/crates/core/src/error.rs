use std::io;

use crate::graph::Model;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    NoVertices,
    #[error("graph must have at least one edge")]
    NoEdges,
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(usize, usize),
    #[error("operation requires the {expected:?} model, graph uses {found:?}")]
    ModelMismatch { expected: Model, found: Model },
    #[error("slot {slot} out of range for vertex {vertex} with list length {len}")]
    SlotOutOfRange {
        vertex: usize,
        slot: usize,
        len: usize,
    },
    #[error("capacity {capacity} on arc ({from}, {to}) outside [1, {bound}]")]
    InvalidCapacity {
        from: usize,
        to: usize,
        capacity: u64,
        bound: u64,
    },
    #[error("source and sink coincide at vertex {0}")]
    SourceIsSink(usize),
    #[error("network graph must be directed")]
    UndirectedNetwork,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph is not bipartite: edge ({0}, {1}) joins same-colored vertices")]
    NotBipartite(usize, usize),
    #[error("instance too large for exhaustive oracle: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
