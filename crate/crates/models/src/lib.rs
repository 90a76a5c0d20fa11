//! Model geometries: the cigar, the Bryant soliton obtained by shooting,
//! products with a line, and the surfaces of revolution used to seed the
//! two-dimensional flow.

mod bryant;
mod cigar;
mod error;
pub mod ode;
mod product;
mod revolution;

pub use bryant::{bryant_shoot, ShootingConfig, ShootingOutcome};
pub use cigar::{cigar_profile, ln_cosh, CIGAR_ASYMPTOTIC_WARP};
pub use error::ModelError;
pub use product::{product_with_line, rotational_to_warped};
pub use revolution::{revolution_surface, RevolutionSurface};
