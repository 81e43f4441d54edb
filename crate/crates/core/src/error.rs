use thiserror::Error;

/// Errors raised by contract violations on the library surface.
#[derive(Debug, Error)]
pub enum Error {
    #[error("exponent p must be a finite positive number, got {0}")]
    InvalidExponent(f64),

    #[error("tolerance must be a finite positive number, got {0}")]
    InvalidTolerance(f64),

    #[error("weight family is inadmissible: {0}")]
    BadWeight(String),

    #[error("coefficient {coef} at position {pos} is not a finite nonzero number")]
    BadCoefficient { pos: String, coef: f64 },

    #[error("duplicate position {0}")]
    DuplicatePosition(String),

    #[error("support of size {size} exceeds the brute-force cap of {max}")]
    SupportTooLarge { size: usize, max: usize },

    #[error("map is not strictly increasing on the support (at {0})")]
    NonMonotoneMap(String),

    #[error("translated blocks overlap at position {0}")]
    BlockOverlap(String),

    #[error("not an exact dyadic rational: {0}")]
    ParseDyadic(String),

    #[error("positioning entry d_{n} = {d} is outside 1..={n}")]
    BadPositioningEntry { n: usize, d: usize },

    #[error("explicit positioning of length {len} cannot be realized to {wanted}")]
    PositioningExhausted { len: usize, wanted: usize },

    #[error("permutation prefixes are not produced by a common insertion recursion (first mismatch at n = {at})")]
    InconsistentPrefixes { at: usize },

    #[error("rank list contains a repeated value at index {0}")]
    DuplicateRank(usize),

    #[error("greedy index {n} exceeds the support size {support}")]
    GreedyIndexTooLarge { n: usize, support: usize },

    #[error("requires m <= n, got m = {m}, n = {n}")]
    BadIndexPair { m: usize, n: usize },

    #[error("seed is not proper (first coefficient vanishes)")]
    ImproperSeed,

    #[error("block index sequence must be strictly increasing (at entry {0})")]
    NotStrictlyIncreasing(usize),

    #[error("block count {wanted} exceeds the provided index list of length {have}")]
    NotEnoughIndices { wanted: usize, have: usize },

    #[error("coefficient family carries no usable tail certificate: {0}")]
    NoTailCertificate(String),

    #[error("block family member {n} has norm {norm}, expected 1 within 1e-9")]
    NotNormalized { n: usize, norm: f64 },

    #[error("vector support must lie in {expected}, found position {found}")]
    SupportOutOfRange { expected: String, found: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
