use thiserror::Error;

/// Errors surfaced by the codecs, synthesizers, and the verifier.
///
/// Every failure here is an argument/shape problem detected up front; none of
/// the constructions fail partway through on well-formed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("tuple codec needs at least one element")]
    EmptyTuple,

    #[error("table dims {dims:?} require {expected} values, got {got}")]
    MalformedTable {
        dims: Vec<usize>,
        expected: usize,
        got: usize,
    },

    #[error("expected a {expected} table, got dims {dims:?}")]
    WrongShape {
        expected: &'static str,
        dims: Vec<usize>,
    },

    #[error("witness domains differ: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("evaluator takes {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("family does not cover coordinate {uncovered}; the pattern is trivially false")]
    NonCoveringSigma { uncovered: usize },

    #[error("invalid sigma spec: {reason}")]
    InvalidSigma { reason: String },

    #[error("invalid evaluator descriptor: {reason}")]
    InvalidDescriptor { reason: String },

    #[error("invalid witness bundle: {reason}")]
    InvalidBundle { reason: String },

    #[error("domain size {size} out of range; the exhaustive sweep handles sizes 2 through 3")]
    SizeOutOfRange { size: usize },

    #[error("synthesizer returned structurally different evaluators across slices")]
    NonUniformSynthesizer,
}

pub type Result<T> = std::result::Result<T, Error>;
