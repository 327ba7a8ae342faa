use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty partition")]
    Empty,
    #[error("malformed token `{token}`")]
    Malformed { token: String },
    #[error("token `{token}` is not positive")]
    NonPositive { token: String },
    #[error("token `{token}` decreases after {previous}; parts must be weakly increasing")]
    Decreasing { token: String, previous: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("partition length n = {n} exceeds the supported maximum {max} for grid computations")]
    TooLarge { n: usize, max: usize },

    #[error("budget exceeded: {what} count exceeds {limit}")]
    BudgetExceeded { what: &'static str, limit: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("point rejected: violates {0}")]
    PointRejected(String),

    #[error("generator {name} is not a lattice automorphism: {reason}")]
    InvalidAutomorphism { name: String, reason: String },

    #[error("skeleton graph is disconnected")]
    Disconnected,

    #[error("diagrams belong to different grids")]
    GridMismatch,

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::TooLarge { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
