use std::f64::consts::FRAC_PI_2;

use crate::{FlowError, FlowState, Mesh};

/// Rounding of the conical poles of the surface of revolution.
///
/// The meridian `(i⁻¹ sin r, z(r))` has `z′ = 1`, which makes both poles
/// cone points. The smoothed surface uses `z′ = |tan r| / √(tan² r + ε²)`,
/// so the poles become caps of parameter width about `ε`, the surface stays
/// convex, and the metric changes by `O(ε² cot² r)` away from the caps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSmoothing {
    pub width: f64,
}

impl Default for PoleSmoothing {
    fn default() -> Self {
        PoleSmoothing { width: 0.5 }
    }
}

/// Meridian data in the form `λ(r) = κ₀ ln tan(r/2) + ∫_{π/2}^{r} q`,
/// `λ′ = a/b`, with `κ₀ = lim i·a` at the poles and `q` smooth.
#[derive(Debug, Clone, Copy)]
struct Meridian {
    i: f64,
    eps: Option<f64>,
}

impl Meridian {
    /// `i·a(r)`.
    fn ia(&self, r: f64) -> f64 {
        let c2 = r.cos().powi(2);
        match self.eps {
            None => (self.i * self.i + c2).sqrt(),
            Some(e) => {
                let s2 = r.sin().powi(2);
                (c2 + self.i * self.i * s2 / (s2 + e * e * c2)).sqrt()
            }
        }
    }

    fn kappa0(&self) -> f64 {
        match self.eps {
            None => (self.i * self.i + 1.0).sqrt(),
            Some(_) => 1.0,
        }
    }

    /// `(i·a − κ₀)/sin r`, written without cancellation.
    fn q(&self, r: f64) -> f64 {
        let sn = r.sin();
        let num = match self.eps {
            None => -sn,
            Some(e) => sn * (self.i * self.i / (sn * sn + e * e * r.cos().powi(2)) - 1.0),
        };
        num / (self.ia(r) + self.kappa0())
    }

    fn lambda(&self, r: f64) -> f64 {
        // composite Simpson; the integrand varies on the scale ε near a pole
        let m = 512;
        let h = (r - FRAC_PI_2) / m as f64;
        let mut acc = self.q(FRAC_PI_2) + self.q(r);
        for k in 1..m {
            acc += if k % 2 == 1 { 4.0 } else { 2.0 } * self.q(FRAC_PI_2 + k as f64 * h);
        }
        self.kappa0() * (0.5 * r).tan().ln() + acc * h / 3.0
    }

    /// `r` at conformal coordinate `x`: safeguarded Newton in
    /// `p = ln tan(r/2)`, along which `λ` increases with `dλ/dp = i·a`.
    fn parameter_at(&self, x: f64) -> f64 {
        let target = (0.5 * x).tan().ln();
        let lam = |p: f64| self.lambda(2.0 * p.exp().atan());
        let (mut lo, mut hi) = (target.min(0.0) - 1.0, target.max(0.0) + 1.0);
        while lam(lo) > target {
            lo = 2.0 * lo - 1.0;
        }
        while lam(hi) < target {
            hi = 2.0 * hi + 1.0;
        }
        let mut p = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = lam(p) - target;
            if g > 0.0 {
                hi = p;
            } else {
                lo = p;
            }
            let newton = p - g / self.ia(2.0 * p.exp().atan());
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - p).abs() <= 4.0 * f64::EPSILON * p.abs().max(1.0) || hi - lo <= f64::EPSILON * p.abs().max(1.0) {
                p = next;
                break;
            }
            p = next;
        }
        2.0 * p.exp().atan()
    }
}

/// Conformal coordinate `x ∈ (0, π)` of the meridian parameter `r` on the
/// surface of revolution with parameter `i`, normalized by `x(π/2) = π/2`.
pub fn conformal_coordinate(i: f64, r: f64, smoothing: Option<PoleSmoothing>) -> f64 {
    let m = Meridian { i, eps: smoothing.map(|p| p.width) };
    2.0 * m.lambda(r).exp().atan()
}

impl FlowState {
    /// The surface of revolution `(i⁻¹ sin r cos θ, i⁻¹ sin r sin θ, z(r))`
    /// in the conformal gauge; `z = r` without smoothing.
    pub fn from_revolution(i: f64, mesh: Mesh, smoothing: Option<PoleSmoothing>) -> Result<Self, FlowError> {
        if !(i > 0.0) || !i.is_finite() {
            return Err(FlowError::InvalidParameter { name: "i", value: i });
        }
        if let Some(p) = smoothing {
            if !(p.width > 0.0) {
                return Err(FlowError::InvalidParameter { name: "width", value: p.width });
            }
        }
        let m = Meridian { i, eps: smoothing.map(|p| p.width) };
        let cells = mesh.cells;
        let xs = mesh.centres();
        // w = (b / sin x)² is symmetric about the equator: fill the near half and mirror
        let mut w = vec![0.0; cells];
        for k in 0..cells.div_ceil(2) {
            let x = xs[k];
            let r = m.parameter_at(x);
            w[k] = (r.sin() / (i * x.sin())).powi(2);
            w[cells - 1 - k] = w[k];
        }
        FlowState::new(mesh, 0.0, w)
    }

    /// The same state rescaled to `K_min = 1`.
    pub fn unit_min_curvature(&self) -> Result<Self, FlowError> {
        let k = self.k_min();
        if !(k > 0.0) {
            return Err(FlowError::NonPositiveCurvature { index: 0, value: k });
        }
        Ok(self.scaled(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn coordinate_round_trip() {
        for i in [0.5, 2.0, 8.0] {
            for eps in [None, Some(0.2)] {
                let m = Meridian { i, eps };
                for r in [1e-3, 0.3, 1.0, FRAC_PI_2, 2.5] {
                    let x = 2.0 * m.lambda(r).exp().atan();
                    assert!((m.parameter_at(x) - r).abs() < 1e-12 * r.max(1.0), "i={i} r={r}");
                }
            }
            assert!((conformal_coordinate(i, FRAC_PI_2, None) - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn unsmoothed_state_has_surface_area_and_curvature() {
        let i = 2.0;
        let s = FlowState::from_revolution(i, Mesh::uniform(400), None).unwrap();
        let a = models::revolution_surface(i, 2001).unwrap().area();
        assert!((s.area() - a).abs() < 1e-3 * a, "{} {a}", s.area());
        // away from the cone points K = (1 + i⁻² cos² r)⁻²
        let k = s.gauss_curvature();
        let m = Meridian { i, eps: None };
        for j in (100..300).step_by(20) {
            let r = m.parameter_at(s.x(j));
            let exact = (1.0 + (r.cos() / i).powi(2)).powi(-2);
            assert!((k[j] - exact).abs() < 1e-3, "{j}: {} {exact}", k[j]);
        }
    }

    #[test]
    fn smoothed_surface_is_convex_and_grid_independent() {
        let a = FlowState::from_revolution(2.0, Mesh::graded(256, 0.8), Some(PoleSmoothing::default())).unwrap();
        let b = FlowState::from_revolution(2.0, Mesh::graded(512, 0.8), Some(PoleSmoothing::default())).unwrap();
        assert!(a.k_min() > 0.0);
        assert!((a.k_max() - b.k_max()).abs() < 1e-2 * b.k_max(), "{} {}", a.k_max(), b.k_max());
        assert!((a.k_min() - b.k_min()).abs() < 1e-3, "{} {}", a.k_min(), b.k_min());
    }

    #[test]
    fn narrow_caps_approach_the_cone() {
        let raw = FlowState::from_revolution(2.0, Mesh::uniform(64), None).unwrap();
        let cap = FlowState::from_revolution(2.0, Mesh::uniform(64), Some(PoleSmoothing { width: 1e-3 })).unwrap();
        assert!((cap.area() - raw.area()).abs() < 1e-4 * raw.area());
    }

    #[test]
    fn smoothed_state_is_symmetric_and_positive() {
        let s = FlowState::from_revolution(2.0, Mesh::graded(128, 0.5), Some(PoleSmoothing::default())).unwrap();
        let w = s.conformal_factor();
        for k in 0..64 {
            assert_eq!(w[k], w[127 - k]);
        }
        assert!(s.k_min() > 0.0);
        let u = s.unit_min_curvature().unwrap();
        assert!((u.k_min() - 1.0).abs() < 1e-12);
        assert!(u.area() < 4.0 * PI);
    }
}
