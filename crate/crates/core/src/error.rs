use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph parameters: {0}")]
    InvalidGraph(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("cannot parse graph spec `{0}`")]
    BadSpec(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operation undefined on the void complex")]
    VoidComplex,
    #[error("operation undefined on the full simplex")]
    FullSimplex,
    #[error("k = {k} exceeds the independence number {alpha}")]
    KTooLarge { k: usize, alpha: usize },
    #[error("complex too large for this route: {0}")]
    TooLarge(String),
    #[error("duplicate vertex {0} in matching order")]
    DuplicateVertex(usize),
    #[error("malformed matching: {0}")]
    MalformedMatching(String),
    #[error("matching is not acyclic")]
    NotAcyclic,
    #[error("invalid block word: {0}")]
    InvalidBlockWord(String),
    #[error("graph is not a squared cycle")]
    NotSquaredCycle,
    #[error("time budget exceeded")]
    TimedOut,
}
