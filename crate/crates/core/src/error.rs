use thiserror::Error;

use crate::space::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed component: {0}")]
    MalformedComponent(String),
    #[error("arithmetic with an infinite value")]
    InfiniteArithmetic,
    #[error("point {0} lies outside the space")]
    PointOutsideDomain(String),
    #[error("subset is not contained in the space (track {0})")]
    SubsetOutsideDomain(usize),
    #[error("malformed space: {0}")]
    Malformed(String),
    #[error("accumulation data does not define a topology ({} violation(s)); first: {}", .0.len(), .0[0])]
    Validation(Vec<Violation>),
    #[error("space is not Hausdorff: {0}")]
    NotHausdorff(String),
    #[error("space is not regular Hausdorff: {0}")]
    NotT3(String),
    #[error("space is not definably near-compact")]
    NotNearCompact,
    #[error("space is not definably separable")]
    NotSeparable,
    #[error("space is finite")]
    FiniteSpace,
    #[error("set is not closed: {0}")]
    NotClosed(String),
    #[error("sets are not disjoint")]
    NotDisjoint,
    #[error("map is not injective on track {0}")]
    NonInjectiveMap(usize),
    #[error("a glued end lies at infinity: {0}")]
    Unbounded(String),
    #[error("half-open piece {0}")]
    HalfOpenPiece(String),
    #[error("infinitely many points carry non-self accumulation: {0}")]
    ExceptionalSetInfinite(String),
    #[error("map is not total: {0}")]
    NotTotal(String),
    #[error("unknown case for piece {0}")]
    UnknownCase(String),
    #[error("unknown example {0:?}")]
    UnknownExample(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
