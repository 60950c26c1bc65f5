use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generator index {index} out of range (group has {count} generators)")]
    GeneratorOutOfRange { index: usize, count: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("sign assignment is not a homomorphism: relator {relator} evaluates to -1")]
    InvalidTwist { relator: String },
    #[error("presentation is inconsistent: {0}")]
    Inconsistent(String),
    #[error("malformed presentation: {0}")]
    Malformed(String),
    #[error("base element outside the cocycle window: {0}")]
    WindowExceeded(String),
    #[error("unknown catalogue label {0:?}")]
    UnknownLabel(String),
    #[error("rotation part is not a unit: {0}")]
    NonUnitRotation(String),
    #[error("expected exactly one relator, found {0}")]
    RelatorCount(usize),
    #[error("operation requires a nontrivial twist")]
    TrivialTwist,
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("holonomy closure exceeded {0} elements")]
    HolonomyGuard(usize),
}
