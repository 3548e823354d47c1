use thiserror::Error;

/// Errors raised by group, distribution, predicate and search operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cyclic order {0} is below 2")]
    OrderTooSmall(u64),
    #[error("a group needs at least one cyclic factor")]
    EmptyGroup,
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    CapExceeded { order: u128, cap: u64 },
    #[error("operands belong to different groups")]
    GroupMismatch,
    #[error("element {0:?} is not a member of the group")]
    NotInGroup(Vec<u64>),
    #[error("matrix shape {rows}x{cols} does not match a group with {factors} cyclic factors")]
    MatrixShape {
        rows: usize,
        cols: usize,
        factors: usize,
    },
    #[error("matrix entry ({i},{j}) = {value} is incompatible: n_j * a_ij is not 0 mod n_i")]
    IncompatibleEntry { i: usize, j: usize, value: u64 },
    #[error("endomorphism is not an automorphism")]
    NotAutomorphism,
    #[error("probability must be non-negative, got {0}")]
    NegativeProbability(String),
    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(String),
    #[error("invalid characteristic function: {0}")]
    InvalidCharFunction(String),
    #[error("membership of character {0:?} in the one-set is numerically ambiguous")]
    AmbiguousOneSet(Vec<u64>),
    #[error("set is not closed under the group operation")]
    NotASubgroup,
    #[error("characteristic function is not strictly positive at {0:?}")]
    NonPositiveChar(Vec<u64>),
    #[error("instance is not canonical (alpha1 = alpha2 = beta1 = I required)")]
    NonCanonical,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("kernel of I + alpha is trivial")]
    TrivialKernel,
    #[error("support escapes the required subgroup")]
    SupportEscapes,
    #[error("group has no elements of order 2")]
    TrivialOrder2,
    #[error("search space of {estimate} candidates exceeds the limit {limit}")]
    SearchOverflow { estimate: u128, limit: u128 },
    #[error("invalid p-adic parameters: {0}")]
    InvalidPadic(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exact and approximate verdicts disagree: {0}")]
    Disagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
