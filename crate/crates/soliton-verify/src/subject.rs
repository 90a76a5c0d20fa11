use std::f64::consts::PI;

use comparison_geom::{profile_distance, GridDistances, Warp};
use geom_core::{AxisLayout, RadialProfile, SolitonFields, WarpedHalfPlaneMetric};

use crate::VerifyError;

/// A Z₂×O(n−1)-symmetric geometry seen through its edge `Γ` (the axis) and
/// the fixed plane `Σ` of the reflection, with `p = Γ ∩ Σ`.
#[derive(Debug, Clone, Copy)]
pub enum Subject<'a> {
    /// Euclidean `ℝ³`, `φ = v`, `f ≡ 0`.
    Flat,
    /// `ℝ × cigar` in closed form; `Γ` is the line of tips.
    LineTimesCigar,
    /// A rotationally symmetric profile; `Γ` is a line through the centre and
    /// `γ` a radial geodesic orthogonal to it.
    Rotational(&'a RadialProfile),
    /// Lattice data; `Γ` is the axis row and `Σ` the column `u = 0`.
    Grid { metric: &'a WarpedHalfPlaneMetric, fiber_dim: usize },
}

/// Quantities at `γ(s)`, the unit-speed geodesic from `p` inside `Σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaStation {
    pub s: f64,
    /// `d(γ(s), Γ)`.
    pub h1: f64,
    /// `φ(γ(s))`.
    pub h2: f64,
    /// `d h₂ / ds`.
    pub dh2: f64,
    pub scalar: f64,
    pub grad_f: f64,
    /// `Ric(X, X)/|X|²` for the rotation field `X`.
    pub fiber_ricci: f64,
}

/// `|S^m|`.
pub fn sphere_area(m: usize) -> f64 {
    match m {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (m as f64 - 1.0) * sphere_area(m - 2),
    }
}

/// Volume of the unit ball in `ℝⁿ`.
pub fn unit_ball_volume(n: usize) -> f64 {
    sphere_area(n - 1) / n as f64
}

/// Piecewise-linear interpolation on an increasing grid, clamped at the ends.
pub(crate) fn interp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&t| t < x);
    if k == 0 {
        return ys[0];
    }
    if k >= xs.len() {
        return ys[xs.len() - 1];
    }
    let t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    ys[k - 1] + t * (ys[k] - ys[k - 1])
}

pub(crate) fn cigar_phi(r: f64) -> f64 {
    2.0 * (0.5 * r).tanh()
}

pub(crate) fn sech2(r: f64) -> f64 {
    (0.5 * r).cosh().powi(-2)
}

/// Per-node fields of a lattice metric, computed once.
pub(crate) struct GridData<'m> {
    pub metric: &'m WarpedHalfPlaneMetric,
    pub fiber_dim: usize,
    pub centre: usize,
    pub scalar: Vec<f64>,
    pub grad_f: Vec<f64>,
    pub fiber_ricci: Vec<f64>,
    /// `∂_v φ / √g_vv`, the derivative of `φ` along the `v` lines.
    pub dphi_ds: Vec<f64>,
    /// Arclength along `Σ` from the axis, per row.
    pub sigma_s: Vec<f64>,
    /// Signed arclength along the axis row from `p`, per column.
    pub gamma_s: Vec<f64>,
    /// Distance from the axis `v = 0` of the first row.
    pub axis_gap: Vec<f64>,
}

impl<'m> GridData<'m> {
    pub fn new(metric: &'m WarpedHalfPlaneMetric, fiber_dim: usize) -> Result<Self, VerifyError> {
        if metric.layout() == AxisLayout::None {
            return Err(VerifyError::Unsupported("lattice does not reach the axis"));
        }
        let (nu, nv) = metric.shape();
        let (hu, hv) = metric.spacing();
        let m = fiber_dim as f64;
        let rep = metric.curvature(fiber_dim)?;
        let grad_f = metric.potential_gradient_norm()?;
        let geo = metric.base_geometry();
        let mut fiber_ricci = vec![0.0; nu * nv];
        let mut dphi_ds = vec![0.0; nu * nv];
        for (k, b) in geo.iter().enumerate() {
            dphi_ds[k] = b.dphi[1] / b.g[2].sqrt();
            if metric.is_axis_row(k % nv) {
                continue;
            }
            let grad2 = b.norm_sq(b.dphi);
            fiber_ricci[k] = -b.trace(b.hess_phi) / b.phi + (m - 1.0) * (1.0 - grad2) / (b.phi * b.phi);
        }
        metric.close_axis(&mut fiber_ricci);
        let centre = metric.nearest_u(0.0);
        let root_vv: Vec<f64> = (0..nv).map(|j| metric.g_vv()[metric.idx(centre, j)].sqrt()).collect();
        let mut sigma_s = vec![metric.v(0) * root_vv[0]; nv];
        for j in 1..nv {
            sigma_s[j] = sigma_s[j - 1] + 0.5 * hv * (root_vv[j] + root_vv[j - 1]);
        }
        let root_uu: Vec<f64> = (0..nu).map(|i| metric.g_uu()[metric.idx(i, 0)].sqrt()).collect();
        let mut gamma_s = vec![0.0; nu];
        for i in centre + 1..nu {
            gamma_s[i] = gamma_s[i - 1] + 0.5 * hu * (root_uu[i] + root_uu[i - 1]);
        }
        for i in (0..centre).rev() {
            gamma_s[i] = gamma_s[i + 1] - 0.5 * hu * (root_uu[i] + root_uu[i + 1]);
        }
        let axis_gap = (0..nu).map(|i| metric.v(0) * metric.g_vv()[metric.idx(i, 0)].sqrt()).collect();
        Ok(GridData {
            metric,
            fiber_dim,
            centre,
            scalar: rep.scalar,
            grad_f,
            fiber_ricci,
            dphi_ds,
            sigma_s,
            gamma_s,
            axis_gap,
        })
    }

    /// Distances from the axis, seeded with the gap of the first row.
    pub fn distance_to_axis(&self) -> Vec<f64> {
        let graph = GridDistances::new(self.metric, 3);
        let (nu, _) = self.metric.shape();
        let seeds: Vec<(usize, f64)> = (0..nu).map(|i| (self.metric.idx(i, 0), self.axis_gap[i])).collect();
        graph.from_seeds(&seeds)
    }

    pub fn distance_to_p(&self) -> Vec<f64> {
        let graph = GridDistances::new(self.metric, 3);
        graph.from_seeds(&[(self.metric.idx(self.centre, 0), self.axis_gap[self.centre])])
    }

    /// Scalar curvature along `Γ` for `s ≥ 0`, by arclength.
    pub fn scalar_on_gamma(&self, s: f64) -> Result<f64, VerifyError> {
        let (nu, _) = self.metric.shape();
        let limit = self.gamma_s[nu - 1];
        if s < 0.0 || s > limit {
            return Err(VerifyError::OutOfDomain { what: "s along Γ", value: s, limit });
        }
        let xs = &self.gamma_s[self.centre..];
        let ys: Vec<f64> = (self.centre..nu).map(|i| self.scalar[self.metric.idx(i, 0)]).collect();
        Ok(interp(xs, &ys, s))
    }

    pub fn scalar_at_p(&self) -> f64 {
        self.scalar[self.metric.idx(self.centre, 0)]
    }

    /// Per-node values on the `Σ` column, interpolated by arclength.
    fn on_sigma(&self, field: &[f64], s: f64) -> f64 {
        let (_, nv) = self.metric.shape();
        let ys: Vec<f64> = (0..nv).map(|j| field[self.metric.idx(self.centre, j)]).collect();
        interp(&self.sigma_s, &ys, s)
    }
}

impl Subject<'_> {
    /// Dimension of the total space.
    pub fn dim(&self) -> usize {
        match self {
            Subject::Flat | Subject::LineTimesCigar => 3,
            Subject::Rotational(p) => p.dim(),
            Subject::Grid { fiber_dim, .. } => fiber_dim + 2,
        }
    }

    pub(crate) fn grid_data(&self) -> Result<Option<GridData<'_>>, VerifyError> {
        match self {
            Subject::Grid { metric, fiber_dim } => Ok(Some(GridData::new(metric, *fiber_dim)?)),
            _ => Ok(None),
        }
    }

    pub(crate) fn profile_scalar(p: &RadialProfile) -> Result<Vec<f64>, VerifyError> {
        Ok(p.scalar_curvature()?)
    }

    /// `R(p)` and `R(Γ(s))` at the requested arclengths.
    pub fn scalar_along_gamma(&self, s: &[f64]) -> Result<(f64, Vec<f64>), VerifyError> {
        match self {
            Subject::Flat => Ok((0.0, vec![0.0; s.len()])),
            Subject::LineTimesCigar => Ok((1.0, vec![1.0; s.len()])),
            Subject::Rotational(p) => {
                let r = Self::profile_scalar(p)?;
                let mut out = Vec::with_capacity(s.len());
                for &x in s {
                    if x < 0.0 || x > p.r_max() {
                        return Err(VerifyError::OutOfDomain { what: "s along Γ", value: x, limit: p.r_max() });
                    }
                    out.push(interp(p.grid(), &r, x));
                }
                Ok((r[0], out))
            }
            Subject::Grid { .. } => {
                let g = self.grid_data()?.expect("grid subject");
                let vals = s.iter().map(|&x| g.scalar_on_gamma(x)).collect::<Result<Vec<_>, _>>()?;
                Ok((g.scalar_at_p(), vals))
            }
        }
    }

    /// Stations along `γ`. `h₁` on lattices is a graph distance.
    pub fn sigma_stations(&self, s: &[f64]) -> Result<Vec<SigmaStation>, VerifyError> {
        match self {
            Subject::Flat => Ok(s
                .iter()
                .map(|&x| SigmaStation { s: x, h1: x, h2: x, dh2: 1.0, scalar: 0.0, grad_f: 0.0, fiber_ricci: 0.0 })
                .collect()),
            Subject::LineTimesCigar => Ok(s
                .iter()
                .map(|&x| {
                    let t = (0.5 * x).tanh();
                    let phi = 2.0 * t;
                    // φ'' = −sech² · tanh, read as −φ''/φ
                    let d2 = -sech2(x) * t;
                    SigmaStation {
                        s: x,
                        h1: x,
                        h2: phi,
                        dh2: sech2(x),
                        scalar: sech2(x),
                        grad_f: t,
                        fiber_ricci: if x == 0.0 { 0.5 } else { -d2 / phi },
                    }
                })
                .collect()),
            Subject::Rotational(p) => {
                let r = Self::profile_scalar(p)?;
                let (_, ls) = p.ricci_diag()?;
                let n = p.dim() as f64;
                let warp = Warp::Sampled(p);
                let mut out = Vec::with_capacity(s.len());
                for &x in s {
                    if x <= 0.0 {
                        return Err(VerifyError::GammaOnAxis { s: x });
                    }
                    if x > p.r_max() {
                        return Err(VerifyError::OutOfDomain { what: "s along Σ", value: x, limit: p.r_max() });
                    }
                    let h2 = p.warp_at(x);
                    let dh2 = p.warp_d1_at(x);
                    // the fiber direction at ψ = π/2 is tangent to the sphere
                    let fiber = if n >= 3.0 { interp(p.grid(), &ls, x) } else { 0.0 };
                    out.push(SigmaStation {
                        s: x,
                        h1: distance_to_line(&warp, x)?,
                        h2,
                        dh2,
                        scalar: interp(p.grid(), &r, x),
                        grad_f: p.potential_d1_at(x).abs(),
                        fiber_ricci: fiber,
                    });
                }
                Ok(out)
            }
            Subject::Grid { .. } => {
                let g = self.grid_data()?.expect("grid subject");
                let d_axis = g.distance_to_axis();
                let (_, nv) = g.metric.shape();
                let first = if g.metric.layout() == AxisLayout::Vertex { g.sigma_s[1] } else { g.sigma_s[0] };
                let limit = g.sigma_s[nv - 1];
                let mut out = Vec::with_capacity(s.len());
                for &x in s {
                    if x < first {
                        return Err(VerifyError::GammaOnAxis { s: x });
                    }
                    if x > limit {
                        return Err(VerifyError::OutOfDomain { what: "s along Σ", value: x, limit });
                    }
                    out.push(SigmaStation {
                        s: x,
                        h1: g.on_sigma(&d_axis, x),
                        h2: g.on_sigma(g.metric.phi(), x),
                        dh2: g.on_sigma(&g.dphi_ds, x),
                        scalar: g.on_sigma(&g.scalar, x),
                        grad_f: g.on_sigma(&g.grad_f, x),
                        fiber_ricci: g.on_sigma(&g.fiber_ricci, x),
                    });
                }
                Ok(out)
            }
        }
    }
}

/// Distance from `(s, π/2)` to the line `{ψ = 0} ∪ {ψ = π}` in
/// `dr² + φ² dψ²`, by golden-section search over the foot point.
fn distance_to_line(warp: &Warp, s: f64) -> Result<f64, VerifyError> {
    let d = |t: f64| profile_distance(warp, s, t, 0.5 * PI).map(|d| d.value);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (0.0, s);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (d(x1)?, d(x2)?);
    for _ in 0..60 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = d(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = d(x2)?;
        }
        // d is quadratic at the minimum, so 1e-6 in t is ~1e-12 in d
        if b - a < 1e-6 * s {
            break;
        }
    }
    // the foot point at the centre gives d = s
    Ok(f1.min(f2).min(s))
}
