use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("operation not supported over this field: {0}")]
    UnsupportedField(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("relation {index} is not homogeneous: {detail}")]
    InhomogeneousRelation { index: usize, detail: String },
    #[error("relation {index} combines non-parallel paths")]
    NonParallelRelation { index: usize },
    #[error("quotient is not finite-dimensional within path length cap {0}")]
    InfiniteDimensional(usize),
    #[error("relation {0} is violated by the module action")]
    RelationViolated(usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("action of arrow `{arrow}` is not homogeneous: {detail}")]
    InhomogeneousBlock { arrow: String, detail: String },
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("algebra is not positively graded")]
    NotPositivelyGraded,
    #[error("zero module not allowed here")]
    ZeroModule,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("window margin too small: need {required}, have {available}")]
    InsufficientMargin { required: i64, available: i64 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
