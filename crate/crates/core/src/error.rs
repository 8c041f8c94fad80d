use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A single broken invariant of a metric measure space, with the offending indices.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    Shape { rows: usize, cols: usize, measure_len: usize },
    NonFinite { i: usize, j: usize },
    NonzeroDiagonal { i: usize, value: f64 },
    Negative { i: usize, j: usize, value: f64 },
    Asymmetric { i: usize, j: usize, diff: f64 },
    Triangle { i: usize, j: usize, via: usize, excess: f64 },
    NonPositiveMeasure { i: usize, value: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::Shape { rows, cols, measure_len } => {
                write!(f, "distance matrix is {rows}x{cols} but measure has {measure_len} entries")
            }
            Violation::NonFinite { i, j } => write!(f, "d({i},{j}) is not finite"),
            Violation::NonzeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value} is not zero"),
            Violation::Negative { i, j, value } => write!(f, "d({i},{j}) = {value} is negative"),
            Violation::Asymmetric { i, j, diff } => {
                write!(f, "d({i},{j}) and d({j},{i}) differ by {diff}")
            }
            Violation::Triangle { i, j, via, excess } => {
                write!(f, "triangle inequality fails: d({i},{j}) exceeds d({i},{via}) + d({via},{j}) by {excess}")
            }
            Violation::NonPositiveMeasure { i, value } => {
                write!(f, "measure of point {i} is {value}, must be > 0")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric measure space: {0}")]
    InvalidSpace(Violation),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("symmetric eigensolver did not converge on a {n}x{n} matrix")]
    EigenNonConvergence { n: usize },

    /// A bound evaluator was called outside the hypotheses under which it holds.
    #[error("hypothesis violated for {bound}: {detail}")]
    Hypothesis { bound: &'static str, detail: String },

    #[error("complex would contain {count} simplices, limit is {limit}")]
    ComplexTooLarge { count: usize, limit: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn hypothesis(bound: &'static str, detail: impl Into<String>) -> Self {
        Error::Hypothesis { bound, detail: detail.into() }
    }
}
