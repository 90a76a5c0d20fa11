use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompError {
    #[error("distances ({0}, {1}, {2}) violate the triangle inequality")]
    TriangleInequality(f64, f64, f64),
    #[error("distances must be positive and finite, got ({0}, {1}, {2})")]
    NonPositiveDistance(f64, f64, f64),
    #[error("unsupported model/point combination: {0}")]
    Unsupported(&'static str),
    #[error("need at least {needed} scale samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("scale {s} lies outside the model domain (limit {limit})")]
    OutOfDomain { s: f64, limit: f64 },
    #[error("no geodesic found between the points")]
    NoGeodesic,
    #[error(transparent)]
    Geom(#[from] geom_core::GeomError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
