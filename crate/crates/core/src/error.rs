use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("not a root: norm {0}")]
    NotARoot(i64),
    #[error("unsupported type tag `{0}`")]
    UnsupportedType(String),
    #[error("index {index} out of range for tuple of length {len}")]
    IndexOutOfRange { index: i64, len: usize },
    #[error("element does not preserve the form")]
    NotOrthogonal,
    #[error("element is not a translation (finite block is not the identity)")]
    NotTranslation,
    #[error("resource cap of {cap} exceeded after {partial} items")]
    CapExceeded { cap: usize, partial: usize },
    #[error("tuples do not lie in the same fiber")]
    DifferentFibers,
    #[error("transporter is not integral; input factorization is not generating")]
    NotIntegral,
    #[error("braid does not stabilize the projected tuple")]
    NotStabilizing,
    #[error("transporter does not commute with the Coxeter transformation")]
    NotCentralizing,
    #[error("splitting failed: {0}")]
    Splitting(String),
    #[error("data file: {0}")]
    Data(String),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("matrix is not in the congruence subgroup of level {ell}")]
    NotInCongruence { ell: i64 },
    #[error("root {0} lies in no conjugacy class")]
    Unclassified(String),
    #[error("target shape not reached within cap {cap}")]
    ShapeNotFound { cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
