use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("ambient rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("zero series has no finite valuation")]
    ZeroSeries,

    #[error("axis {axis} has sign -1 but meets the non-integer exponent coordinate {coord}")]
    NonIntegerSignedExponent { axis: usize, coord: String },

    #[error("expansion up to the frontier needs infinitely many terms")]
    DivergentExpansion,

    #[error("coordinate x{0} lies in the support and cannot be inverted by the chart")]
    ChartOnSupport(usize),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("monomial map needs x{0} inverted but it lies in the support")]
    SupportObstruction(usize),

    #[error("matrix is not unimodular: {0}")]
    NotUnimodular(String),

    #[error("malformed descriptor: {0}")]
    MalformedDescriptor(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid scalar literal {0:?}")]
    BadScalar(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
