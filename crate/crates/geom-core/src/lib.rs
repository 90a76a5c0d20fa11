//! Domain types for rotationally symmetric and warped metrics, with discrete
//! curvature evaluated through the warped-product formulas.
//!
//! Two metric shapes are supported:
//!
//! * [`RadialProfile`]: `dr² + φ(r)² g_{S^{n-1}}` sampled on a radial grid.
//! * [`WarpedHalfPlaneMetric`]: `g_N + φ² g_{S^m}` with `g_N` a 2D metric on a
//!   rectangular `(u, v)` lattice, the axis sitting at `v = 0`.
//!
//! All derivatives that are not supplied analytically are second-order finite
//! differences, with parity ghosts across the axis.

mod csvio;
mod error;
pub mod fd;
mod profile;
mod report;
mod warped;

pub use csvio::{read_grid_csv, read_profile_csv, write_grid_csv, write_profile_csv, GRID_HEADER, PROFILE_HEADER};
pub use error::GeomError;
pub use profile::RadialProfile;
pub use report::{ConcavityReport, CurvatureReport, Extreme, SectionalFamily};
pub use warped::{AxisLayout, BaseGeometry, WarpedHalfPlaneMetric};

/// Anything that can report the two ingredients of `R + |∇f|²`.
pub trait SolitonFields {
    /// Scalar curvature at every sample.
    fn scalar_curvature(&self) -> Result<Vec<f64>>;
    /// `|∇f|` at every sample, using the carried potential.
    fn potential_gradient_norm(&self) -> Result<Vec<f64>>;
}

pub type Result<T> = std::result::Result<T, GeomError>;
