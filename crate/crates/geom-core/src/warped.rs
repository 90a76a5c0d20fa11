use crate::fd::{self, Parity};
use crate::report::{ConcavityReport, CurvatureReport, SectionalFamily};
use crate::{GeomError, Result, SolitonFields};

/// Where the lattice sits relative to the axis `v = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisLayout {
    /// First lattice row lies on the axis.
    Vertex,
    /// First row at `v = hv/2`; the axis is a cell face.
    Cell,
    /// Lattice does not reach the axis.
    None,
}

/// `g = g_N + φ² g_{S^m}` with `g_N = g_uu du² + 2 g_uv du dv + g_vv dv²`.
///
/// Fields are stored row-major with index `i * nv + j`, `i` along `u` and `j`
/// along `v`. Across the axis, `g_uu`, `g_vv` and `f` are even, and `g_uv`
/// and `φ` are odd.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedHalfPlaneMetric {
    u0: f64,
    hu: f64,
    nu: usize,
    v0: f64,
    hv: f64,
    nv: usize,
    layout: AxisLayout,
    g_uu: Vec<f64>,
    g_uv: Vec<f64>,
    g_vv: Vec<f64>,
    phi: Vec<f64>,
    f: Vec<f64>,
}

/// Pointwise geometry of the base and of the warp/potential.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BaseGeometry {
    /// `(g_uu, g_uv, g_vv)`.
    pub g: [f64; 3],
    /// Inverse metric `(g^uu, g^uv, g^vv)`.
    pub ginv: [f64; 3],
    /// Gauss curvature of `g_N`.
    pub gauss: f64,
    pub phi: f64,
    pub dphi: [f64; 2],
    /// Covariant Hessian of `φ`, `(uu, uv, vv)`.
    pub hess_phi: [f64; 3],
    pub f: f64,
    pub df: [f64; 2],
    /// Covariant Hessian of `f` on the base, `(uu, uv, vv)`.
    pub hess_f: [f64; 3],
}

impl BaseGeometry {
    pub fn norm_sq(&self, w: [f64; 2]) -> f64 {
        let gi = self.ginv;
        gi[0] * w[0] * w[0] + 2.0 * gi[1] * w[0] * w[1] + gi[2] * w[1] * w[1]
    }

    pub fn inner(&self, a: [f64; 2], b: [f64; 2]) -> f64 {
        let gi = self.ginv;
        gi[0] * a[0] * b[0] + gi[1] * (a[0] * b[1] + a[1] * b[0]) + gi[2] * a[1] * b[1]
    }

    /// `g^{ij} S_ij` for a symmetric 2-tensor given as `(uu, uv, vv)`.
    pub fn trace(&self, s: [f64; 3]) -> f64 {
        let gi = self.ginv;
        gi[0] * s[0] + 2.0 * gi[1] * s[1] + gi[2] * s[2]
    }

    /// Eigenvalues of `g⁻¹S`, ascending.
    pub fn eigs(&self, s: [f64; 3]) -> [f64; 2] {
        let g = self.g;
        let a = g[0] * g[2] - g[1] * g[1];
        let b = -(s[0] * g[2] + s[2] * g[0] - 2.0 * s[1] * g[1]);
        let c = s[0] * s[2] - s[1] * s[1];
        let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
        [(-b - disc) / (2.0 * a), (-b + disc) / (2.0 * a)]
    }

    /// `√(tr((g⁻¹S)²))`, the operator-size of a symmetric tensor.
    pub fn frobenius(&self, s: [f64; 3]) -> f64 {
        let [l1, l2] = self.eigs(s);
        (l1 * l1 + l2 * l2).sqrt()
    }
}

impl WarpedHalfPlaneMetric {
    /// Build and validate. `fields` is `(g_uu, g_uv, g_vv, φ, f)`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        (u0, hu, nu): (f64, f64, usize),
        (v0, hv, nv): (f64, f64, usize),
        g_uu: Vec<f64>,
        g_uv: Vec<f64>,
        g_vv: Vec<f64>,
        phi: Vec<f64>,
        f: Vec<f64>,
    ) -> Result<Self> {
        if !(hu > 0.0) {
            return Err(GeomError::BadSpacing(hu));
        }
        if !(hv > 0.0) {
            return Err(GeomError::BadSpacing(hv));
        }
        if nu < 4 || nv < 4 {
            return Err(GeomError::TooFewSamples { needed: 4, got: nu.min(nv) });
        }
        if v0 < 0.0 {
            return Err(GeomError::NonMonotoneGrid { index: 0 });
        }
        let n = nu * nv;
        for (name, fld) in [("g_uu", &g_uu), ("g_uv", &g_uv), ("g_vv", &g_vv), ("phi", &phi), ("f", &f)] {
            if fld.len() != n {
                return Err(GeomError::LengthMismatch { field: name, got: fld.len(), expected: n });
            }
        }
        let layout = if v0 == 0.0 {
            AxisLayout::Vertex
        } else if (v0 - 0.5 * hv).abs() <= 1e-12 * hv {
            AxisLayout::Cell
        } else {
            AxisLayout::None
        };
        let m = WarpedHalfPlaneMetric { u0, hu, nu, v0, hv, nv, layout, g_uu, g_uv, g_vv, phi, f };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        for i in 0..self.nu {
            for j in 0..self.nv {
                let k = self.idx(i, j);
                let on_axis = self.is_axis_row(j);
                if !on_axis {
                    let det = self.g_uu[k] * self.g_vv[k] - self.g_uv[k].powi(2);
                    if !(self.g_uu[k] > 0.0 && det > 0.0) {
                        return Err(GeomError::IndefiniteMetric { i, j });
                    }
                    if !(self.phi[k] > 0.0) {
                        return Err(GeomError::NonPositiveWarp { index: k, value: self.phi[k] });
                    }
                } else if self.phi[k] != 0.0 {
                    return Err(GeomError::AxisWarpNonzero { index: k, value: self.phi[k] });
                }
            }
        }
        Ok(())
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.nv + j
    }
    pub fn shape(&self) -> (usize, usize) {
        (self.nu, self.nv)
    }
    pub fn spacing(&self) -> (f64, f64) {
        (self.hu, self.hv)
    }
    pub fn layout(&self) -> AxisLayout {
        self.layout
    }
    pub fn u(&self, i: usize) -> f64 {
        self.u0 + i as f64 * self.hu
    }
    pub fn v(&self, j: usize) -> f64 {
        self.v0 + j as f64 * self.hv
    }
    pub fn u_grid(&self) -> Vec<f64> {
        (0..self.nu).map(|i| self.u(i)).collect()
    }
    pub fn v_grid(&self) -> Vec<f64> {
        (0..self.nv).map(|j| self.v(j)).collect()
    }
    pub fn g_uu(&self) -> &[f64] {
        &self.g_uu
    }
    pub fn g_uv(&self) -> &[f64] {
        &self.g_uv
    }
    pub fn g_vv(&self) -> &[f64] {
        &self.g_vv
    }
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }
    pub fn potential(&self) -> &[f64] {
        &self.f
    }

    /// True for lattice rows lying on the axis.
    pub fn is_axis_row(&self, j: usize) -> bool {
        self.layout == AxisLayout::Vertex && j == 0
    }

    /// Per-node mask of the axis `Γ`.
    pub fn axis_mask(&self) -> Vec<bool> {
        (0..self.nu * self.nv).map(|k| self.is_axis_row(k % self.nv)).collect()
    }

    /// Index of the `u`-node closest to `u`.
    pub fn nearest_u(&self, u: f64) -> usize {
        (((u - self.u0) / self.hu).round().max(0.0) as usize).min(self.nu - 1)
    }

    fn v_parity(&self, p: Parity) -> Option<Parity> {
        match self.layout {
            AxisLayout::None => None,
            _ => Some(p),
        }
    }

    /// `(∂u, ∂v, ∂uu, ∂uv, ∂vv)` of a field with the given axis parity.
    pub fn field_derivatives(&self, x: &[f64], parity: Parity) -> [Vec<f64>; 5] {
        let (nu, nv) = (self.nu, self.nv);
        let ug = self.u_grid();
        let vg = self.v_grid();
        let mut du = vec![0.0; nu * nv];
        let mut duu = vec![0.0; nu * nv];
        let mut dv = vec![0.0; nu * nv];
        let mut dvv = vec![0.0; nu * nv];
        let mut duv = vec![0.0; nu * nv];
        let mut col = vec![0.0; nu];
        for j in 0..nv {
            for i in 0..nu {
                col[i] = x[self.idx(i, j)];
            }
            let (d1, d2) = fd::derivatives(&ug, &col, None);
            for i in 0..nu {
                du[self.idx(i, j)] = d1[i];
                duu[self.idx(i, j)] = d2[i];
            }
        }
        for i in 0..nu {
            let row = &x[i * nv..(i + 1) * nv];
            let (d1, d2) = fd::derivatives(&vg, row, self.v_parity(parity));
            dv[i * nv..(i + 1) * nv].copy_from_slice(&d1);
            dvv[i * nv..(i + 1) * nv].copy_from_slice(&d2);
        }
        for j in 0..nv {
            for i in 0..nu {
                col[i] = dv[self.idx(i, j)];
            }
            let d1 = fd::derivative(&ug, &col, None);
            for i in 0..nu {
                duv[self.idx(i, j)] = d1[i];
            }
        }
        [du, dv, duu, duv, dvv]
    }

    /// Pointwise base geometry. Axis nodes carry `φ = 0` and derived
    /// quantities that divide by `φ` must not be read there.
    pub fn base_geometry(&self) -> Vec<BaseGeometry> {
        self.geometry_with(&self.f)
    }

    fn geometry_with(&self, f: &[f64]) -> Vec<BaseGeometry> {
        let [eu, ev, _, _, evv] = self.field_derivatives(&self.g_uu, Parity::Even);
        let [fu, fv, _, fuv, _] = self.field_derivatives(&self.g_uv, Parity::Odd);
        let [gu, gv, guu, _, _] = self.field_derivatives(&self.g_vv, Parity::Even);
        let [pu, pv, puu, puv, pvv] = self.field_derivatives(&self.phi, Parity::Odd);
        let [qu, qv, quu, quv, qvv] = self.field_derivatives(f, Parity::Even);
        (0..self.nu * self.nv)
            .map(|k| {
                let (e, ff, g) = (self.g_uu[k], self.g_uv[k], self.g_vv[k]);
                let det = e * g - ff * ff;
                let ginv = [g / det, -ff / det, e / det];
                // lowered Christoffels Γ_{l,ij}, coordinates 0 = u, 1 = v
                let dg = [[eu[k], fu[k], gu[k]], [ev[k], fv[k], gv[k]]];
                let comp = |m: usize, a: usize, b: usize| -> f64 {
                    match (a, b) {
                        (0, 0) => dg[m][0],
                        (1, 1) => dg[m][2],
                        _ => dg[m][1],
                    }
                };
                let mut low = [[[0.0; 2]; 2]; 2];
                for l in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            low[l][i][j] = 0.5 * (comp(i, j, l) + comp(j, i, l) - comp(l, i, j));
                        }
                    }
                }
                let gi2 = [[ginv[0], ginv[1]], [ginv[1], ginv[2]]];
                let mut gam = [[[0.0; 2]; 2]; 2];
                for kk in 0..2 {
                    for i in 0..2 {
                        for j in 0..2 {
                            gam[kk][i][j] = gi2[kk][0] * low[0][i][j] + gi2[kk][1] * low[1][i][j];
                        }
                    }
                }
                // Brioschi formula
                let a11 = -0.5 * evv[k] + fuv[k] - 0.5 * guu[k];
                let m1 = [
                    [a11, 0.5 * eu[k], fu[k] - 0.5 * ev[k]],
                    [fv[k] - 0.5 * gu[k], e, ff],
                    [0.5 * gv[k], ff, g],
                ];
                let m2 = [[0.0, 0.5 * ev[k], 0.5 * gu[k]], [0.5 * ev[k], e, ff], [0.5 * gu[k], ff, g]];
                let gauss = (det3(&m1) - det3(&m2)) / (det * det);
                let hess = |d: [f64; 2], dd: [f64; 3]| -> [f64; 3] {
                    [
                        dd[0] - gam[0][0][0] * d[0] - gam[1][0][0] * d[1],
                        dd[1] - gam[0][0][1] * d[0] - gam[1][0][1] * d[1],
                        dd[2] - gam[0][1][1] * d[0] - gam[1][1][1] * d[1],
                    ]
                };
                let dphi = [pu[k], pv[k]];
                let df = [qu[k], qv[k]];
                BaseGeometry {
                    g: [e, ff, g],
                    ginv,
                    gauss,
                    phi: self.phi[k],
                    dphi,
                    hess_phi: hess(dphi, [puu[k], puv[k], pvv[k]]),
                    f: f[k],
                    df,
                    hess_f: hess(df, [quu[k], quv[k], qvv[k]]),
                }
            })
            .collect()
    }

    /// Replace axis-row entries of a per-node field by even extrapolation
    /// from the three nearest rows.
    pub fn close_axis(&self, q: &mut [f64]) {
        if self.layout != AxisLayout::Vertex {
            return;
        }
        let vs = [self.v(1), self.v(2), self.v(3)];
        for i in 0..self.nu {
            let k = self.idx(i, 0);
            q[k] = fd::even_extrapolate3(vs, [q[k + 1], q[k + 2], q[k + 3]]);
        }
    }

    /// Curvature report of `g_N + φ² g_{S^m}` with `m = fiber_dim`.
    ///
    /// Sectional families: `base` (Gauss curvature of `g_N`), `mixed`
    /// (planes spanned by a base and a fiber direction) and, for `m ≥ 2`,
    /// `fiber`.
    pub fn curvature(&self, fiber_dim: usize) -> Result<CurvatureReport> {
        if fiber_dim == 0 {
            return Err(GeomError::BadFiberDim);
        }
        let m = fiber_dim as f64;
        let geo = self.base_geometry();
        let n = geo.len();
        let (mut lam1, mut lam2) = (vec![0.0; n], vec![0.0; n]);
        let mut lam_f = vec![0.0; n];
        let mut base = vec![0.0; n];
        let (mut mix_lo, mut mix_hi) = (vec![0.0; n], vec![0.0; n]);
        let mut fiber = vec![0.0; n];
        for (k, b) in geo.iter().enumerate() {
            if self.is_axis_row(k % self.nv) {
                continue;
            }
            let h = b.hess_phi;
            let s = [
                b.gauss * b.g[0] - m * h[0] / b.phi,
                b.gauss * b.g[1] - m * h[1] / b.phi,
                b.gauss * b.g[2] - m * h[2] / b.phi,
            ];
            let [l1, l2] = b.eigs(s);
            lam1[k] = l1;
            lam2[k] = l2;
            let grad2 = b.norm_sq(b.dphi);
            let lap = b.trace(h);
            let ff = (1.0 - grad2) / (b.phi * b.phi);
            lam_f[k] = -lap / b.phi + (m - 1.0) * ff;
            base[k] = b.gauss;
            let [h1, h2] = b.eigs(h);
            mix_lo[k] = -h2 / b.phi;
            mix_hi[k] = -h1 / b.phi;
            fiber[k] = ff;
        }
        for q in [&mut lam1, &mut lam2, &mut lam_f, &mut base, &mut mix_lo, &mut mix_hi, &mut fiber] {
            self.close_axis(q);
        }
        let eigs = (0..n)
            .map(|k| {
                let mut e = vec![lam1[k], lam2[k]];
                e.extend(std::iter::repeat(lam_f[k]).take(fiber_dim));
                e
            })
            .collect();
        let mut families = vec![
            SectionalFamily { name: "base", min: base.clone(), max: base },
            SectionalFamily { name: "mixed", min: mix_lo, max: mix_hi },
        ];
        if fiber_dim >= 2 {
            families.push(SectionalFamily { name: "fiber", min: fiber.clone(), max: fiber });
        }
        Ok(CurvatureReport::assemble(eigs, families))
    }

    /// Largest eigenvalue of `g⁻¹∇²φ` tested against zero.
    pub fn concavity(&self) -> ConcavityReport {
        let geo = self.base_geometry();
        let mut top: Vec<f64> = geo.iter().map(|b| b.eigs(b.hess_phi)[1]).collect();
        self.close_axis(&mut top);
        ConcavityReport::from_eigs(top.into_iter())
    }

    /// `|∇f|` for an arbitrary function on this lattice (even across the axis).
    pub fn gradient_norm(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.nu * self.nv {
            return Err(GeomError::LengthMismatch { field: "f", got: f.len(), expected: self.nu * self.nv });
        }
        Ok(self.geometry_with(f).iter().map(|b| b.norm_sq(b.df).max(0.0).sqrt()).collect())
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

impl SolitonFields for WarpedHalfPlaneMetric {
    fn scalar_curvature(&self) -> Result<Vec<f64>> {
        Ok(self.curvature(1)?.scalar)
    }

    fn potential_gradient_norm(&self) -> Result<Vec<f64>> {
        self.gradient_norm(&self.f)
    }
}
