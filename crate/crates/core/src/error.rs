use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {v} out of range for graph with {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} is not in the graph")]
    MissingEdge(usize, usize),
    #[error("terminals must be distinct (got {0} twice)")]
    SameTerminals(usize),
    #[error("terminals {0} and {1} are adjacent")]
    AdjacentTerminals(usize, usize),
    #[error("no separator of size at most {0}")]
    CutTooLarge(usize),
    #[error("graph has {n} vertices, limit is {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid tree decomposition: {0}")]
    Decomposition(String),
    #[error("class {class} is not hereditary: {detail}")]
    NotHereditary { class: String, detail: String },
    #[error("unknown graph class {0}")]
    UnknownClass(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
