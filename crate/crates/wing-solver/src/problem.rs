use std::f64::consts::PI;

use geom_core::fd::cumulative_trapezoid;

use crate::WingError;

/// Unknowns per node: `g_uu`, `g_uv / v`, `g_vv`, `φ² / v²`, `f`.
pub const FIELDS: usize = 5;
pub const FIELD_NAMES: [&str; FIELDS] = ["A", "F", "B", "C", "f"];

/// Gauge fixing of the soliton system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Gauge {
    /// DeTurck term `½ L_W g` with `W` the trace of the difference between
    /// the connection and that of the bent-product background.
    #[default]
    Background,
}

/// The truncated problem on `0 ≤ u ≤ U`, `0 < v < V`; `u ↦ −u` is the
/// reflection and `v = 0` the rotation axis.
///
/// Nodes sit at `u_i = i h`, `i = 0..=(nodes_u − 1)/2`, and at cell centres
/// `v_j = (j + ½) h`, `j < nodes_v`, with `h = 2U / (nodes_u − 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WingProblem {
    pub alpha0: f64,
    pub half_length: f64,
    /// Lattice size across the full strip `−U ≤ u ≤ U`; odd.
    pub nodes_u: usize,
    pub nodes_v: usize,
    /// Length scale `a` of the bend in the background.
    pub bend_scale: f64,
    pub gauge: Gauge,
    pub tol: f64,
    pub max_iter: usize,
}

impl WingProblem {
    /// Defaults: `U = 16`, 257 × 129 nodes, `h = 1/8`, tolerance `1e-8`.
    pub fn new(alpha0: f64) -> Self {
        WingProblem {
            alpha0,
            half_length: 16.0,
            nodes_u: 257,
            nodes_v: 129,
            bend_scale: 1.0,
            gauge: Gauge::Background,
            tol: 1e-8,
            max_iter: 20,
        }
    }

    pub fn validate(&self) -> Result<(), WingError> {
        // α₀ = π is the straight product, kept as the exact limit case
        if !(self.alpha0 > 0.0 && self.alpha0 <= PI) {
            return Err(WingError::OutOfRange { name: "alpha0", value: self.alpha0, expected: "in (0, π]" });
        }
        if !(self.half_length > 0.0) || !self.half_length.is_finite() {
            return Err(WingError::OutOfRange { name: "half_length", value: self.half_length, expected: "> 0" });
        }
        if self.nodes_u < 9 || self.nodes_u % 2 == 0 {
            return Err(WingError::OutOfRange { name: "nodes_u", value: self.nodes_u as f64, expected: "odd, ≥ 9" });
        }
        if self.nodes_v < 5 {
            return Err(WingError::OutOfRange { name: "nodes_v", value: self.nodes_v as f64, expected: "≥ 5" });
        }
        if self.spacing() > 0.125 + 1e-12 {
            return Err(WingError::OutOfRange {
                name: "spacing",
                value: self.spacing(),
                expected: "≤ 1/8 (8 nodes per unit length)",
            });
        }
        if !(self.bend_scale > 0.0) {
            return Err(WingError::OutOfRange { name: "bend_scale", value: self.bend_scale, expected: "> 0" });
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(WingError::OutOfRange { name: "tol", value: self.tol, expected: "> 0 with max_iter ≥ 1" });
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / (self.nodes_u - 1) as f64
    }

    /// Nodes on the half strip `u ≥ 0`.
    pub fn half_nodes_u(&self) -> usize {
        (self.nodes_u - 1) / 2 + 1
    }

    pub fn u(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    pub fn v(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.spacing()
    }

    pub fn unknowns(&self) -> usize {
        FIELDS * self.half_nodes_u() * self.nodes_v
    }

    /// `ℝ × cigar` bent to opening angle `α₀`.
    ///
    /// In polar coordinates `r` of the `(u, v)` chart the base is
    /// conformal with factor `e = (1 + r²/a²)^((β − 1)/2)`, `β = α₀/π`,
    /// which opens the half-plane into a sector of angle `α₀` far out. The
    /// warp is a cigar of curvature `sin²(α₀/2)` across the edge,
    /// `φ = (2/k) tanh(kρ/2)` with `ρ = v e`, `k = sin(α₀/2)`, and the
    /// potential adds `cos(α₀/2)` times the radial distance to the cigar
    /// potential, so that `|∇f| → 1` along the sector's interior.
    pub fn background(&self) -> WingState {
        let (nu, nv) = (self.half_nodes_u(), self.nodes_v);
        let al = self.alpha0;
        let k = (0.5 * al).sin();
        let beta = al / PI;
        let a = self.bend_scale;
        let conformal = |r2: f64| ((r2 + a * a) / (a * a)).powf(0.5 * (beta - 1.0));

        // radial distance ∫₀^r e(t) dt, tabulated
        let r_top = (self.u(nu - 1).powi(2) + self.v(nv - 1).powi(2)).sqrt() + 1.0;
        let rr: Vec<f64> = (0..=20000).map(|m| r_top * m as f64 / 20000.0).collect();
        let e1: Vec<f64> = rr.iter().map(|r| conformal(r * r)).collect();
        let dist = cumulative_trapezoid(&rr, &e1);
        let radial = |r: f64| {
            let x = r / r_top * 20000.0;
            let m = (x.floor() as usize).min(19999);
            let t = x - m as f64;
            dist[m] * (1.0 - t) + dist[m + 1] * t
        };
        // bends the level sets of the linear part toward the edges
        let c2 = if al < PI - 1e-12 { 1.0 - (1.0 - k * beta) / (0.5 * al).cos() } else { 0.0 };

        let mut st = WingState::zeros(nu, nv);
        for i in 0..nu {
            for j in 0..nv {
                let (u, v) = (self.u(i), self.v(j));
                let r2 = u * u + v * v;
                let e = conformal(r2);
                let x = 0.5 * k * v * e;
                let q = x.tanh() / x;
                let d = radial(r2.sqrt());
                let lin = ((d * d + 1.0).sqrt() - 1.0) * (1.0 - c2 * v * v / (r2 + 1e-2));
                let f = 2.0 * x.cosh().ln() + (0.5 * al).cos() * lin;
                st.set(0, i, j, e * e);
                st.set(2, i, j, e * e);
                st.set(3, i, j, (e * q).powi(2));
                st.set(4, i, j, f);
            }
        }
        st
    }
}

/// Nodal unknowns on the half strip, stored field-major:
/// `data[(field · nu + i) · nv + j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WingState {
    pub nu: usize,
    pub nv: usize,
    pub data: Vec<f64>,
}

impl WingState {
    pub fn zeros(nu: usize, nv: usize) -> Self {
        WingState { nu, nv, data: vec![0.0; FIELDS * nu * nv] }
    }

    pub fn from_data(problem: &WingProblem, data: Vec<f64>) -> Result<Self, WingError> {
        if data.len() != problem.unknowns() {
            return Err(WingError::ShapeMismatch { got: data.len(), expected: problem.unknowns() });
        }
        Ok(WingState { nu: problem.half_nodes_u(), nv: problem.nodes_v, data })
    }

    #[inline]
    pub fn index(&self, field: usize, i: usize, j: usize) -> usize {
        (field * self.nu + i) * self.nv + j
    }

    #[inline]
    pub fn get(&self, field: usize, i: usize, j: usize) -> f64 {
        self.data[self.index(field, i, j)]
    }

    #[inline]
    pub fn set(&mut self, field: usize, i: usize, j: usize, x: f64) {
        let k = self.index(field, i, j);
        self.data[k] = x;
    }

    pub fn field(&self, field: usize) -> &[f64] {
        let n = self.nu * self.nv;
        &self.data[field * n..(field + 1) * n]
    }

    /// First node where `g_uu > 0`, `det g_N > 0` or `C > 0` fails.
    pub fn check_positive(&self, problem: &WingProblem) -> Result<(), WingError> {
        for i in 0..self.nu {
            for j in 0..self.nv {
                let (a, ft, b, c) = (self.get(0, i, j), self.get(1, i, j), self.get(2, i, j), self.get(3, i, j));
                let g_uv = problem.v(j) * ft;
                if !(a > 0.0) {
                    return Err(WingError::Positivity { i, j, what: "g_uu ≤ 0" });
                }
                if !(a * b - g_uv * g_uv > 0.0) {
                    return Err(WingError::Positivity { i, j, what: "g_N indefinite" });
                }
                if !(c > 0.0) {
                    return Err(WingError::Positivity { i, j, what: "φ ≤ 0 off the axis" });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn straight_background_is_the_cigar_product() {
        let p = WingProblem { half_length: 4.0, nodes_u: 65, nodes_v: 33, ..WingProblem::new(PI) };
        let bg = p.background();
        for i in [0, 10, 32] {
            for j in [0, 5, 32] {
                let v = p.v(j);
                assert!((bg.get(0, i, j) - 1.0).abs() < 1e-15);
                assert_eq!(bg.get(1, i, j), 0.0);
                let phi = v * bg.get(3, i, j).sqrt();
                assert!((phi - 2.0 * (0.5 * v).tanh()).abs() < 1e-14);
                assert!((bg.get(4, i, j) - 2.0 * (0.5 * v).cosh().ln()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn bent_background_opens_to_the_sector() {
        let p = WingProblem::new(2.5);
        let bg = p.background();
        // away from the axis the warp saturates at 2/k, k = sin(α₀/2)
        let k = (1.25f64).sin();
        let (i, j) = (p.half_nodes_u() - 1, p.nodes_v - 1);
        assert!(bg.get(0, i, 0) < 1.0);
        let phi = p.v(j) * bg.get(3, 0, j).sqrt();
        assert!(phi < 2.0 / k && phi > 1.5, "{phi}");
        bg.check_positive(&p).unwrap();
    }

    #[test]
    fn validation() {
        assert!(WingProblem::new(4.0).validate().is_err());
        assert!(WingProblem::new(0.0).validate().is_err());
        assert!(WingProblem::new(2.5).validate().is_ok());
        let coarse = WingProblem { nodes_u: 129, nodes_v: 65, ..WingProblem::new(2.5) };
        assert!(coarse.validate().is_err());
    }
}
