use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid coefficient ring: {0}")]
    InvalidRing(String),
    #[error("presentation rejected: {0}")]
    InvalidPresentation(String),
    #[error("objects live over different presentations")]
    PresentationMismatch,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a complex: {0}")]
    ComplexNotValid(String),
    #[error("parse error at byte {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("form is not closed")]
    NotACocycle,
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("truncation unavailable: {0}")]
    UnsupportedTruncation(String),
    #[error("form lies outside the truncation: {0}")]
    OutOfTruncation(String),
    #[error("truncation is not a subcomplex: {0}")]
    TruncationNotSubcomplex(String),
    #[error("not transversally smooth: {0}")]
    NotTransversallySmooth(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("characteristic {p} too small for degree {q} transgression (need p > 2q)")]
    SmallCharacteristic { p: u64, q: usize },
    #[error("polynomial is not homogeneous: {0}")]
    NonHomogeneous(String),
    #[error("lift does not reduce to the given data: {0}")]
    WrongReduction(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
}
