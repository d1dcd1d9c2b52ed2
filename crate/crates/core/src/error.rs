use thiserror::Error;

/// Errors raised by tree parsing, hypermatrix construction and the verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex set is empty")]
    EmptySet,
    #[error("vertex {vertex} out of range for a tree on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("brute-force oracle limited to n <= {limit}, got n = {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("hypermatrix with {requested} entries exceeds the budget of {budget}")]
    BudgetExceeded { requested: u128, budget: u64 },
    #[error("conductor mismatch: expected {expected}, found {found}")]
    ConductorMismatch { expected: u64, found: u64 },
    #[error("point has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("construction needs at least {min} vertices, tree has {n}")]
    TooSmall { n: usize, min: usize },
    #[error("order {0} is even; the canonical nullvector exists only for odd orders")]
    EvenOrder(usize),
    #[error("order must be at least {min}, got {k}")]
    InvalidOrder { k: usize, min: usize },
    #[error("divisor is not a nonzero linear form")]
    NotLinearForm,
    #[error("point is the zero vector")]
    ZeroVector,
    #[error("hypermatrix has a nonzero degenerate entry at {0:?}")]
    NotDegenerateZeroed(Vec<usize>),
    #[error("order-2 forms in {0} variables have no degenerate unit nullvector")]
    OrderTooLow(usize),
    #[error("expected a 2x2x2 hypermatrix, got order {k} dimension {n}")]
    WrongShape { k: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
