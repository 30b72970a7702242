use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("size limit exceeded: {what} is {actual}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        actual: usize,
        limit: usize,
    },
    #[error("invalid tree-depth witness: {0}")]
    WitnessInvalid(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("primary branch not at capacity")]
    CapacityViolated,
    #[error("pairwise hull intersections disagree: {0}")]
    IntersectionMismatch(String),
    #[error("rows of the matrix are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("branch-depth exceeds {0}")]
    BranchDepthExceeded(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("objective term {index} is not convex: {reason}")]
    NonConvex { index: usize, reason: String },
    #[error("no feasible starting point found")]
    NoFeasibleStart,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
