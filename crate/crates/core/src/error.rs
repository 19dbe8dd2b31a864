use thiserror::Error;

use crate::structure::ZeroSetProfile;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("exponent m must be at least 1")]
    ZeroExponent,

    #[error("group Z_{n} x Z_{n} is too large for this toolkit")]
    GroupTooLarge { n: u64 },

    #[error("coordinate ({x1}, {x2}) is out of range for Z_{n}")]
    CoordinateOutOfRange { x1: i64, x2: i64, n: u32 },

    #[error("operands belong to different groups")]
    ContextMismatch,

    #[error("set is not closed under the group law")]
    NotASubgroup,

    #[error("{value} has no inverse modulo {modulus}")]
    NotInvertible { value: i64, modulus: u32 },

    #[error("matrix determinant is {det}, expected 1 mod {n}")]
    DeterminantNotOne { det: u32, n: u32 },

    #[error("no symplectic partner exists: {0}")]
    NoSymplecticPartner(&'static str),

    #[error("operation is undefined on the empty set")]
    EmptySet,

    #[error("operation requires m = 2, got m = {0}")]
    RequiresSquareGroup(u32),

    #[error("size {size} is not a power of {p}; no tiling or spectral partner exists")]
    SizeObstruction { size: usize, p: u32 },

    #[error("set is not a tile")]
    NotATile,

    #[error("set is not spectral with the given spectrum")]
    NotSpectral,

    #[error("supplied sets are not a tiling pair")]
    NotATilingPair,

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("unreachable case `{case}` reached on a verified input")]
    Contradiction {
        case: &'static str,
        profile: Option<Box<ZeroSetProfile>>,
    },

    #[error("tiling routes disagree: difference-set route says {by_difference}, coverage route says {by_coverage}")]
    RouteDisagreement { by_difference: bool, by_coverage: bool },

    #[error("{0} is already periodic")]
    AlreadyPeriodic(&'static str),

    #[error("unknown lemma tag `{0}`")]
    UnknownLemma(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}
