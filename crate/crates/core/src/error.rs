use thiserror::Error;

use crate::graph::VertexId;

/// Errors produced by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("invalid marks: {0}")]
    InvalidMarks(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("oracle cap exceeded: instance has {vertices} vertices, cap is {cap}")]
    OracleCapExceeded { vertices: usize, cap: usize },
    #[error("construction rejected: {0}")]
    ConstructionRejected(String),
}
