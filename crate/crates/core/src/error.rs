use alloc::string::String;

use crate::graph::{EdgeId, PartitionId, VertexId};

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("partition {pid} out of range for k={k}")]
    PartitionOutOfRange { pid: PartitionId, k: u32 },
    #[error("invalid edge weight {0}: must lie in (0, 1]")]
    InvalidWeight(f64),
    #[error("partition count mismatch: expected k={expected}, got k={actual}")]
    PartitionCountMismatch { expected: u32, actual: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("missing property `{key}` on {entity}")]
    MissingProperty { entity: String, key: String },
    #[error("partition {0} has zero volume")]
    ZeroVolume(PartitionId),
    #[error("graph has no edge weight")]
    EdgelessGraph,
    #[error("mean must be positive, got {0}")]
    NonPositiveMean(f64),
    #[error("total traffic is zero")]
    ZeroTraffic,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("graph is not a {expected} dataset: {reason}")]
    WrongDataset { expected: &'static str, reason: String },
    #[error("vertex {end} unreachable from {start}")]
    Unreachable { start: VertexId, end: VertexId },
}
