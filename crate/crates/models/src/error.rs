use geom_core::GeomError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("shooting bracket does not straddle a root: D({lo}) = {d_lo}, D({hi}) = {d_hi}")]
    BracketNoSignChange { lo: f64, hi: f64, d_lo: f64, d_hi: f64 },
    #[error("integration failed at r = {r}: {reason}")]
    StepFailure { r: f64, reason: &'static str },
    #[error("profile grid must be uniform to build a lattice (spacing varies at sample {index})")]
    NonUniformGrid { index: usize },
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
}
