use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("grid is not strictly increasing at index {index}")]
    NonMonotoneGrid { index: usize },
    #[error("field `{field}` has length {got}, expected {expected}")]
    LengthMismatch { field: &'static str, got: usize, expected: usize },
    #[error("warp is not positive off the axis at sample {index} (phi = {value})")]
    NonPositiveWarp { index: usize, value: f64 },
    #[error("warp must vanish on the axis, found {value} at sample {index}")]
    AxisWarpNonzero { index: usize, value: f64 },
    #[error("axis singularity: phi'(0) = {slope}, expected 1")]
    AxisSingularity { slope: f64 },
    #[error("base metric is not positive definite at node ({i}, {j})")]
    IndefiniteMetric { i: usize, j: usize },
    #[error("grid needs at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("invalid grid spacing {0}")]
    BadSpacing(f64),
    #[error("fiber dimension must be at least 1")]
    BadFiberDim,
    #[error("dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("csv: {0}")]
    Csv(String),
}

impl From<csv::Error> for GeomError {
    fn from(e: csv::Error) -> Self {
        GeomError::Csv(e.to_string())
    }
}
