use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("time step {dt:e} exceeds the stability bound; retry with dt ≤ {suggested:e}")]
    StepTooLarge { dt: f64, suggested: f64 },
    #[error("conformal factor lost positivity at cell {index}")]
    NonPositive { index: usize },
    #[error("no stopping condition met within {steps} steps (t = {t})")]
    Budget { steps: usize, t: f64 },
    #[error("minimum curvature {value} ≤ 0 at sample {index}")]
    NonPositiveCurvature { index: usize, value: f64 },
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
