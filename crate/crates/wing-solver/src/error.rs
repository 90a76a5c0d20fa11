use thiserror::Error;

#[derive(Debug, Error)]
pub enum WingError {
    #[error("{name} = {value} out of range ({expected})")]
    OutOfRange { name: &'static str, value: f64, expected: &'static str },
    #[error("state has {got} values, the grid needs {expected}")]
    ShapeMismatch { got: usize, expected: usize },
    #[error("positivity lost at node ({i}, {j}): {what}")]
    Positivity { i: usize, j: usize, what: &'static str },
    #[error("Newton stagnated after {iterations} steps at residual {residual:e}")]
    Stagnation { iterations: usize, residual: f64 },
    #[error("Newton did not reach {tol:e} in {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64, tol: f64 },
    #[error("sparse factorization failed: {0}")]
    Factorization(String),
    #[error(transparent)]
    Geom(#[from] geom_core::GeomError),
    #[error(transparent)]
    Verify(#[from] soliton_verify::VerifyError),
    #[error(transparent)]
    Comp(#[from] comparison_geom::CompError),
}
