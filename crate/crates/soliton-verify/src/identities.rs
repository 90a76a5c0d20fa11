use geom_core::{RadialProfile, SolitonFields, WarpedHalfPlaneMetric};
use models::RevolutionSurface;

use crate::report::{IdentityReport, Trend};
use crate::{Subject, VerifyError};

/// Metric data carrying its own potential.
#[derive(Debug, Clone, Copy)]
pub enum Fields<'a> {
    Profile(&'a RadialProfile),
    Warped { metric: &'a WarpedHalfPlaneMetric, fiber_dim: usize },
    /// A surface with `f ≡ 0`.
    Surface(&'a RevolutionSurface),
}

/// Nodes away from the outer boundary, where every stencil is centred.
fn interior(m: &WarpedHalfPlaneMetric) -> Vec<usize> {
    let (nu, nv) = m.shape();
    let mut out = Vec::with_capacity(nu * nv);
    for i in 1..nu - 1 {
        for j in 0..nv - 1 {
            out.push(m.idx(i, j));
        }
    }
    out
}

/// Largest operator norm of `Ric − ∇²f`. On profiles the outermost node is
/// excluded; on lattices the outer boundary is.
pub fn soliton_residual(fields: Fields, tol: f64) -> Result<IdentityReport, VerifyError> {
    let name = "soliton_residual";
    match fields {
        Fields::Profile(p) => {
            let (lr, ls) = p.ricci_diag()?;
            let (hr, hs) = p.hessian_potential_diag();
            let dev = (0..p.len() - 1).map(|k| (lr[k] - hr[k]).abs().max((ls[k] - hs[k]).abs()));
            Ok(IdentityReport::from_deviations(name, dev, tol))
        }
        Fields::Warped { metric, fiber_dim } => {
            let m = fiber_dim as f64;
            let nv = metric.shape().1;
            let geo = metric.base_geometry();
            let mut dev = vec![0.0; geo.len()];
            for (k, b) in geo.iter().enumerate() {
                if metric.is_axis_row(k % nv) {
                    continue;
                }
                let h = b.hess_phi;
                let ric = [
                    b.gauss * b.g[0] - m * h[0] / b.phi,
                    b.gauss * b.g[1] - m * h[1] / b.phi,
                    b.gauss * b.g[2] - m * h[2] / b.phi,
                ];
                let base = [ric[0] - b.hess_f[0], ric[1] - b.hess_f[1], ric[2] - b.hess_f[2]];
                let [l1, l2] = b.eigs(base);
                let grad2 = b.norm_sq(b.dphi);
                let fiber_ric = -b.trace(h) / b.phi + (m - 1.0) * (1.0 - grad2) / (b.phi * b.phi);
                let fiber_hess = b.inner(b.dphi, b.df) / b.phi;
                dev[k] = l1.abs().max(l2.abs()).max((fiber_ric - fiber_hess).abs());
            }
            metric.close_axis(&mut dev);
            let idx = interior(metric);
            let rep = IdentityReport::from_deviations(name, idx.iter().map(|&k| dev[k]), tol);
            Ok(IdentityReport { location: idx[rep.location], ..rep })
        }
        Fields::Surface(s) => {
            let k = s.gauss_curvature();
            Ok(IdentityReport::from_deviations(name, k, tol))
        }
    }
}

/// Spread `max − min` of `R + |∇f|²`; the location is the sample farthest
/// from the value at `p`.
pub fn hamilton_identity(fields: Fields, tol: f64) -> Result<IdentityReport, VerifyError> {
    let (q, nodes, reference): (Vec<f64>, Vec<usize>, usize) = match fields {
        Fields::Profile(p) => (hamilton_values(p)?, (0..p.len()).collect(), 0),
        Fields::Surface(s) => (hamilton_values(s)?, (0..s.len()).collect(), 0),
        Fields::Warped { metric, fiber_dim } => {
            let r = metric.curvature(fiber_dim)?.scalar;
            let g = metric.potential_gradient_norm()?;
            let q = r.iter().zip(&g).map(|(r, g)| r + g * g).collect();
            (q, interior(metric), metric.idx(metric.nearest_u(0.0), 0))
        }
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut far = (0.0, nodes[0]);
    for &k in &nodes {
        lo = lo.min(q[k]);
        hi = hi.max(q[k]);
        let d = (q[k] - q[reference]).abs();
        if d > far.0 {
            far = (d, k);
        }
    }
    Ok(IdentityReport::new("hamilton_identity", hi - lo, far.1, tol))
}

fn hamilton_values(x: &dyn SolitonFields) -> Result<Vec<f64>, VerifyError> {
    let r = x.scalar_curvature()?;
    let g = x.potential_gradient_norm()?;
    Ok(r.iter().zip(&g).map(|(r, g)| r + g * g).collect())
}

/// `Ric(X̂, X̂)` against `|∇f| h₂′/h₂` along `γ`, `X` the rotation field.
pub fn killing_identity(subject: &Subject, stations: &[f64], tol: f64) -> Result<IdentityReport, VerifyError> {
    let st = subject.sigma_stations(stations)?;
    let dev = st.iter().map(|x| x.fiber_ricci - x.grad_f * x.dh2 / x.h2);
    Ok(IdentityReport::from_deviations("killing_identity", dev, tol))
}

/// `R(Γ(s_max))` against `R(p) sin²(α/2)`, with `R` sampled along `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeLimitReport {
    pub report: IdentityReport,
    pub scalar_at_p: f64,
    /// `R(p) sin²(α/2)`.
    pub target: f64,
    pub s: Vec<f64>,
    pub scalar_on_gamma: Vec<f64>,
    pub trend: Trend,
}

/// Samples `R(Γ(s))` at `s_max k / samples`, `k = 1..=samples`.
pub fn edge_limit_check(
    subject: &Subject,
    alpha: f64,
    s_max: f64,
    samples: usize,
    tol: f64,
) -> Result<EdgeLimitReport, VerifyError> {
    if samples < 2 {
        return Err(VerifyError::TooFewSamples { needed: 2, got: samples });
    }
    let s: Vec<f64> = (1..=samples).map(|k| s_max * k as f64 / samples as f64).collect();
    let (rp, r) = subject.scalar_along_gamma(&s)?;
    let target = rp * (0.5 * alpha).sin().powi(2);
    let last = *r.last().expect("samples ≥ 2");
    let report = IdentityReport::new("edge_limit", (last - target).abs(), samples - 1, tol);
    Ok(EdgeLimitReport { report, scalar_at_p: rp, target, trend: Trend::of(&r), s, scalar_on_gamma: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use models::{cigar_profile, product_with_line, revolution_surface};

    fn round_sphere() -> RadialProfile {
        let g: Vec<f64> = (0..=300).map(|k| k as f64 * 0.01).collect();
        let phi = g.iter().map(|r| r.sin()).collect();
        RadialProfile::from_samples(2, g, phi, vec![0.0; 301]).unwrap()
    }

    #[test]
    fn residual_examples() {
        let flat = {
            let g: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
            RadialProfile::from_samples(3, g.clone(), g, vec![0.0; 101]).unwrap()
        };
        assert!(soliton_residual(Fields::Profile(&flat), 1e-12).unwrap().pass);
        let s = soliton_residual(Fields::Profile(&round_sphere()), 1.0).unwrap();
        assert!((s.max_deviation - 1.0).abs() < 1e-3, "{}", s.max_deviation);
        let c = cigar_profile(20.0, 0.01).unwrap();
        assert!(soliton_residual(Fields::Profile(&c), 1e-12).unwrap().pass);
    }

    #[test]
    fn cigar_residual_converges_at_second_order() {
        let err = |h: f64| {
            let c = cigar_profile(20.0, h).unwrap().redifferenced().unwrap();
            soliton_residual(Fields::Profile(&c), 1.0).unwrap().max_deviation
        };
        let ratio = err(0.02) / err(0.01);
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn hamilton_examples() {
        let c = cigar_profile(50.0, 1e-3).unwrap();
        assert!(hamilton_identity(Fields::Profile(&c), 1e-10).unwrap().pass);
        let s = revolution_surface(1.0, 2049).unwrap();
        let h = hamilton_identity(Fields::Surface(&s), 1.0).unwrap();
        assert!((h.max_deviation - 1.5).abs() < 1e-9, "{}", h.max_deviation);
    }

    #[test]
    fn warped_product_residual_is_small() {
        let c = cigar_profile(12.0, 0.02).unwrap();
        let m = product_with_line(&c, 1.0).unwrap();
        let r = soliton_residual(Fields::Warped { metric: &m, fiber_dim: 1 }, 1e-3).unwrap();
        assert!(r.pass, "{r:?}");
        let h = hamilton_identity(Fields::Warped { metric: &m, fiber_dim: 1 }, 1e-3).unwrap();
        assert!(h.pass, "{h:?}");
    }

    #[test]
    fn edge_limit_on_product_is_exact() {
        let e = edge_limit_check(&Subject::LineTimesCigar, std::f64::consts::PI, 100.0, 10, 1e-12).unwrap();
        assert_eq!(e.report.max_deviation, 0.0);
        assert_eq!(e.trend, Trend::Constant);
        // sin²(π/4) = 1/2
        let e = edge_limit_check(&Subject::LineTimesCigar, std::f64::consts::FRAC_PI_2, 10.0, 4, 1.0).unwrap();
        assert!((e.target - 0.5).abs() < 1e-15);
    }

    #[test]
    fn killing_on_flat_and_product() {
        let st: Vec<f64> = (1..=20).map(|k| k as f64 * 0.5).collect();
        let f = killing_identity(&Subject::Flat, &st, 0.0).unwrap();
        assert!(f.pass);
        let c = killing_identity(&Subject::LineTimesCigar, &st, 1e-14).unwrap();
        assert!(c.pass, "{c:?}");
    }
}
