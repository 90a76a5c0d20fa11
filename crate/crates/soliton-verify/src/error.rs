use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("station s = {s} lies on the axis")]
    GammaOnAxis { s: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("{what} = {value} outside the available domain (limit {limit})")]
    OutOfDomain { what: &'static str, value: f64, limit: f64 },
    #[error("{0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Geom(#[from] geom_core::GeomError),
    #[error(transparent)]
    Comp(#[from] comparison_geom::CompError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
