use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop on vertex {vertex} is not allowed")]
    SelfLoop { vertex: usize },

    #[error("the given set is not a vertex cover: edge {u}-{v} is uncovered")]
    NotAVertexCover { u: usize, v: usize },

    #[error("graph too large for exact treedepth: {n} vertices exceeds cap {cap}")]
    TreedepthCapExceeded { n: usize, cap: usize },

    #[error("component of size {size} exceeds the signature cap {cap}")]
    ComponentCapExceeded { size: usize, cap: usize },

    #[error("invalid treedepth decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("teaching map does not cover concept with center {center}")]
    MapMissingConcept { center: usize },

    #[error("teaching map assigns a set to {center}, which is not a concept center")]
    MapUnknownConcept { center: usize },

    #[error("instance has variant {found}, expected {expected}")]
    WrongVariant { expected: &'static str, found: &'static str },

    #[error("search budget exhausted after exploring {nodes} nodes")]
    ResourceExhausted { nodes: u64 },

    #[error("solution lifting failed at vertex {vertex}; this indicates a kernelization soundness bug")]
    LiftingFailed { vertex: usize },

    #[error("planarity assumption violated: {0}")]
    PlanarityViolated(String),

    #[error("construction produced an invalid certificate: {0}")]
    ConstructionFailed(String),

    #[error("malformed clause: {0}")]
    MalformedClause(String),

    #[error("assignment does not satisfy the formula")]
    UnsatisfyingAssignment,

    #[error("cannot extract an assignment: teaching set of the concept at vertex {vertex} is not a literal choice")]
    AssignmentExtraction { vertex: usize },

    #[error("duplicate concept at position {index}")]
    DuplicateConcept { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
