//! Checks of the steady-soliton identities `Ric = ∇²f` and
//! `R + |∇f|² = const`, the Killing-field identity along the reflection
//! plane, the edge-curvature relation `R(Γ(s)) → R(p) sin²(α/2)`, and the
//! growth diagnostics `h₁`, `h₂`, ball integrals of `R` and volume ratios.
//!
//! Inputs are profiles and lattice metrics from the other crates, or the
//! closed-form models named in [`Subject`].

mod edge;
mod error;
mod identities;
mod reduction;
mod report;
mod subject;
mod volume;

pub use edge::{h_diagnostics, write_edge_csv, EdgeDiagnostics, EDGE_HEADER};
pub use error::VerifyError;
pub use identities::{edge_limit_check, hamilton_identity, killing_identity, soliton_residual, EdgeLimitReport, Fields};
pub use reduction::{dimension_reduction_probe, ReductionProbe, Reference};
pub use report::{summary, write_identity_csv, IdentityReport, Trend, IDENTITY_HEADER};
pub use subject::{sphere_area, unit_ball_volume, SigmaStation, Subject};
pub use volume::{avr_estimate, integral_r_growth, AvrReport, RGrowth};
