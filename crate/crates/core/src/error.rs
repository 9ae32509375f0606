use crate::graph::Vertex;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),

    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),

    /// Cutset enumeration would visit more candidate subsets than allowed.
    #[error("enumeration budget exceeded: {nonfree} non-free vertices (limit {limit}), {candidates} candidate subsets")]
    BudgetExceeded {
        nonfree: usize,
        limit: usize,
        candidates: u128,
    },

    #[error("time budget exceeded")]
    Timeout,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for the two resource-limit errors (enumeration size and wall clock).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::Timeout)
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
