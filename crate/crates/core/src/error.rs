use thiserror::Error;

use crate::flow::{EdgeId, NodeId};
use crate::hypergraph::{HyperedgeId, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid cut: side must be a proper nonempty subset of the vertex set")]
    InvalidCut,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown vertex id {0}")]
    UnknownVertexId(VertexId),
    #[error("unknown hyperedge id {0}")]
    UnknownHyperedge(HyperedgeId),
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("hyperedge {index} lists vertex `{vertex}` more than once")]
    RepeatedVertexInHyperedge { index: usize, vertex: String },
    #[error("hyperedge {index} has {size} vertices; at least 2 are required")]
    HyperedgeTooSmall { index: usize, size: usize },
    #[error("hyperedge {edge} does not contain the split vertex")]
    TrimTargetLacksVertex { edge: HyperedgeId },
    #[error("hyperedges {keep} and {absorb} do not intersect exactly in the split vertex")]
    NotAlmostDisjoint { keep: HyperedgeId, absorb: HyperedgeId },
    #[error("operation {index} of the log is invalid: {source}")]
    Replay {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("query endpoints must be distinct")]
    SameEndpoints,
    #[error("node {0} is not a terminal")]
    NotTerminal(NodeId),
    #[error("node {0} is a terminal; reductions only apply between non-terminals")]
    EndpointIsTerminal(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("edge {0} is not present")]
    MissingEdge(EdgeId),
    #[error("self-loops are not allowed (node {0})")]
    SelfLoop(NodeId),
    #[error("node {0} still has incident edges")]
    NodeNotIsolated(NodeId),
    #[error("instance too large for brute force: {size} exceeds the bound {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A guarantee of the construction was observed to fail. Always a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
