use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("incomparable sizes: |{0}| and |{1}| differ")]
    IncomparableSizes(usize, usize),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("bead count {r} is smaller than the number of parts {len}")]
    BeadCountTooSmall { r: usize, len: usize },

    #[error("{0} is not an {1}-core")]
    NotACore(String, usize),

    #[error("{0} is not {1}-regular")]
    NotRegular(String, usize),

    #[error("Scopes condition violated: runner {runner} has only {k} more beads than runner {prev}, need at least {w}")]
    ScopesConditionViolated {
        runner: usize,
        prev: usize,
        k: i64,
        w: usize,
    },

    #[error("rotation would leave runner 0 without beads")]
    RotationUnderflow,

    #[error("partitions do not lie in a single block")]
    MixedBlocks,

    #[error("representation-finite block: weight {0} < 2")]
    RepresentationFinite(usize),

    #[error("quantum characteristic {0} out of scope: every result here assumes quantum characteristic at least 3")]
    QuantumCharacteristic(usize),

    #[error("row removal needs equal first rows")]
    RowRemoval,

    #[error("column removal needs equal numbers of parts")]
    ColumnRemoval,

    #[error("restriction precondition failed: {0}")]
    Restriction(String),

    #[error("block is not Rouquier: {0}")]
    NotRouquier(String),

    #[error("wrong dominance direction: {0} does not dominate {1}")]
    WrongDominanceDirection(String, String),

    #[error("deduction inconsistency at ({0}, {1}): lower {2} > upper {3}")]
    DeductionInconsistency(String, String, u64, u64),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
