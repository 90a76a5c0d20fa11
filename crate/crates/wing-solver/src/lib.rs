//! Steady solitons `Ric = ∇²f` with `Z₂ × O(2)` symmetry in three
//! dimensions, solved on a truncated half strip by Newton's method.
//!
//! The metric is `A du² + 2vF̃ du dv + B dv² + v²C dθ²` over the `(u, v)`
//! half-plane, `v = 0` the rotation axis and `u = 0` the reflection plane.
//! Writing `g_uv` and `φ²` with explicit powers of `v` makes every unknown
//! even across the axis, so a cell-centred lattice needs no axis rows.

mod error;
mod newton;
mod problem;
mod report;
mod residual;

pub use error::WingError;
pub use newton::{newton_solve, to_metric, Measured, WingSolution};
pub use problem::{Gauge, WingProblem, WingState, FIELDS, FIELD_NAMES};
pub use report::{wing_report, WingReport, CONCAVITY_TOL, EDGE_TOL, HAMILTON_TOL, SEC_TOL, SOLITON_TOL};
pub use residual::{assemble_system, max_norm, Discretization, Jacobian, System};
