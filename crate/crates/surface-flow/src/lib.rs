//! Ricci flow `∂g/∂t = −2K g` of rotationally symmetric metrics on the
//! 2-sphere, with the flow-and-rescale bookkeeping `r(t)` used to normalize
//! the family of surfaces of revolution.
//!
//! Metrics are held in the conformal gauge `g = w(x)(dx² + sin²x dθ²)` on a
//! cell-centred, optionally pole-graded grid in `x ∈ (0, π)`. In this gauge the flow is the scalar
//! equation `w_t = 2(Δ_round u − 1)` with `u = ½ ln w`, and the discrete
//! area loses exactly `8π` per unit time.

mod error;
mod normalize;
mod revolution;
mod state;
mod trajectory;

pub use error::FlowError;
pub use normalize::{normalization_factor, Normalization};
pub use revolution::{conformal_coordinate, PoleSmoothing};
pub use state::{FlowState, Mesh};
pub use trajectory::{run_flow, write_trajectory_csv, DtControl, FlowTrajectory, StopReason, TRAJECTORY_HEADER};
