use thiserror::Error;

/// Errors surfaced by the pipeline. Violations of internal invariants that
/// the theory guarantees (and that cannot be triggered by user data) are
/// assertions instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2..=65536")]
    InvalidModulus(u64),

    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,

    #[error("series inversion requires a unit constant term")]
    NonUnitConstantTerm,

    #[error("operation would produce {requested} coefficients, over the cap of {cap}")]
    PrecisionCapExceeded { requested: usize, cap: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("exponent at byte {pos} does not fit the supported range")]
    ExponentOverflow { pos: usize },

    #[error("the zero polynomial is not a valid input here")]
    ZeroPolynomial,

    #[error("no algebraic relation mod {p} survives: the reduction has y-degree 0")]
    NoRelationModP { p: u32 },

    #[error("instance too large: p^d = {pd} exceeds the cap of {cap}")]
    InstanceTooLarge { pd: u64, cap: u64 },

    #[error("representation dimension {dim} exceeds the cap of {cap}")]
    DimensionCapExceeded { dim: usize, cap: usize },

    #[error("automaton construction exceeded the state cap ({reached} states reached)")]
    StateCapExceeded { reached: usize },

    #[error("prefix too short: {got} coefficients given, {needed} needed")]
    PrefixTooShort { needed: usize, got: usize },

    #[error("prefix rejected: it is not consistent with the equation")]
    PrefixRejected,

    #[error("negative part of b(x) failed to cancel; the prefix does not extend to a root")]
    CancellationFailed,

    #[error("no power series root found")]
    NoRoots,

    #[error("prefix does not select a unique branch (found {found})")]
    AmbiguousBranch { found: usize },

    #[error("no branch extends the given prefix")]
    EmptyBranch,

    #[error("series have different precisions ({0} vs {1})")]
    PrecisionMismatch(usize, usize),

    #[error("the y-degree must be at least {needed} for this bound (got {got})")]
    DegreeTooSmall { needed: u32, got: u32 },

    #[error("bound does not fit in 64 bits")]
    BoundOverflow,

    #[error("requested range is too large to scan ({len} values)")]
    RangeTooLarge { len: u64 },

    #[error("index {index} is below the automaton's index offset {offset}")]
    IndexBelowOffset { index: String, offset: u32 },

    #[error("schema error at {path}: {msg}")]
    Schema { path: String, msg: String },

    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
