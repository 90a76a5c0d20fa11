//! Euclidean comparison angles, distances on the model geometries, and the
//! asymptotic cone angle `α` read off from comparison triangles `p, Γ(s), Γ(−s)`
//! (or, on lattices, from half-cone triangles `p, Γ(s), γ(s)`).

mod angle;
mod clairaut;
mod cone;
mod error;
mod grid;
mod model;

pub use angle::comparison_angle;
pub use clairaut::{profile_distance, Distance, Warp};
pub use cone::{estimate_cone_angle, write_cone_csv, ConeAngleEstimate, ConeProbe, CONE_HEADER};
pub use error::CompError;
pub use grid::{GridDistances, GridProbe, GridTriangle};
pub use model::{model_distance, Model, Point};
