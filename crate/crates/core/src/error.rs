use thiserror::Error;

/// Errors raised when an input violates a structural precondition.
///
/// Mathematical check failures are never errors; they are reported through
/// the various report types so that witnesses can be listed.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("duplicate element id `{0}`")]
    DuplicateElement(String),
    #[error("unknown element id `{0}`")]
    UnknownElement(String),
    #[error("element index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("order relation is not antisymmetric: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    NotAntisymmetric(String, String),
    #[error("map is not monotone: `{0}` <= `{1}` but images are unrelated")]
    NotMonotone(String, String),
    #[error("map is not total: element `{0}` has no image")]
    MissingImage(String),
    #[error("subposet is not closed (downward-closed): `{0}` is missing")]
    NotClosed(String),
    #[error("subposet is not open (upward-closed): `{0}` is missing")]
    NotOpen(String),
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("differentials do not square to zero in degree {0}")]
    NotAComplex(i32),
    #[error("not a chain map in degree {0}")]
    NotAChainMap(i32),
    #[error("simplex {0:?} has no maximal stratum label")]
    IncompatibleStratification(Vec<String>),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported field `{0}`")]
    UnsupportedField(String),
}

pub type Result<T> = std::result::Result<T, Error>;
