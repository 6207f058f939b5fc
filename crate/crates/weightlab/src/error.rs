use thiserror::Error;

use crate::graph::{Edge, VertexId};

/// Input-class errors. Every variant maps to CLI exit code 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("edge endpoint {0} is not a declared vertex")]
    UndeclaredEndpoint(VertexId),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("vertex set is not a subset of the graph's vertices (missing {0})")]
    NotASubset(VertexId),
    #[error("malformed vertex id {id:?} for family {family}: {reason}")]
    MalformedVertexId {
        family: String,
        id: String,
        reason: String,
    },
    #[error("unknown family {0:?} (expected path, grid2d, tree:<d>, ladder)")]
    UnknownFamily(String),
    #[error("unknown mode {0:?} (expected edge123, edgeK:<k>, total:<a>,<b>, lists-from-file)")]
    UnknownMode(String),
    #[error("ball of radius {radius} around {center} exceeds {limit} vertices")]
    BallTooLarge {
        center: VertexId,
        radius: u32,
        limit: usize,
    },
    #[error("list for {0} is empty")]
    EmptyList(String),
    #[error("missing list for {0}")]
    MissingList(String),
    #[error("weighting is missing a value for {0}")]
    MissingWeight(String),
    #[error("weighting does not cover {0}, cannot restrict")]
    RestrictOutsideDomain(String),
    #[error("pinned value {value} for {item} is outside its list")]
    PinnedValueOutsideList { item: String, value: i64 },
    #[error("pinned item {0} is not in the graph")]
    PinnedItemUnknown(String),
    #[error("assignment space of {0} exceeds the enumeration bound; set a limit")]
    EnumerationTooLarge(u128),
    #[error("graph still has an edge between infinite-degree vertices: {0}-{1}")]
    InfiniteEdgeRemains(VertexId, VertexId),
    #[error("missing solve outcome for the component containing {0}")]
    MissingComponentOutcome(VertexId),
    #[error("component containing {0} was not solved (outcome {1})")]
    ComponentNotSolved(VertexId, String),
    #[error("no valid weighting of the outer ball exists; the list assignment is unsuitable")]
    OuterBallUnsat,
    #[error("outer ball search aborted under the node budget; raise the budget")]
    OuterBallAborted,
    #[error("radius {0} is out of range: {1}")]
    RadiusOutOfRange(u32, String),
    #[error("invalid list parameter: {0}")]
    BadListParameter(String),
    #[error("malformed graph file: {0}")]
    MalformedGraph(String),
    #[error("malformed weighting file: {0}")]
    MalformedWeighting(String),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("edge {0:?} referenced by a list or weight does not exist")]
    UnknownEdge(Edge),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
