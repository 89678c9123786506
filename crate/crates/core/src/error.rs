use thiserror::Error;

use crate::triangulation::FaceRef;

pub type Result<T, E = LensError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("p = {p} and q = {q} are not coprime")]
    NonCoprime { p: i64, q: i64 },

    #[error("parameters out of range: {0}")]
    OutOfRange(String),

    #[error("unknown edge class `{0}`")]
    UnknownEdge(String),

    #[error("computed cell structure disagrees with the expected naming: {0}")]
    Inconsistent(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("edge weight on {edge} is not integral: {total} incidences over degree {degree}")]
    NonIntegralWeight {
        edge: String,
        total: i64,
        degree: usize,
    },

    #[error("vector is not a normal surface: {0}")]
    NotNormal(String),

    #[error("surface is not connected ({components} components)")]
    NotConnected { components: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("quad vector is not admissible: {reason}")]
    Inadmissible {
        reason: String,
        face: Option<FaceRef>,
        cut_vertex: Option<u8>,
    },

    #[error("p = {0} is odd")]
    OddP(String),

    #[error("invalid continued fraction input: {0}")]
    InvalidFraction(String),

    #[error("negative coordinate {value} at block {block}, entry {entry}")]
    NegativeCoordinate {
        block: usize,
        entry: usize,
        value: i64,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("value does not fit in a machine integer: {0}")]
    Overflow(String),
}

impl LensError {
    pub(crate) fn inadmissible(reason: impl Into<String>) -> Self {
        LensError::Inadmissible {
            reason: reason.into(),
            face: None,
            cut_vertex: None,
        }
    }
}
