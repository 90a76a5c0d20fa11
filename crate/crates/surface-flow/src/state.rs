use std::f64::consts::PI;

use crate::FlowError;

/// Cell layout in `x ∈ [0, π]`: faces at `X(y)` for uniform `y`, with
/// `X(y) = y − (a/2) sin 2y`. Grading `a ∈ [0, 1)` shrinks the pole cells
/// by `1 − a` and widens the equator cells by `1 + a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh {
    pub cells: usize,
    pub grading: f64,
}

impl Mesh {
    pub fn uniform(cells: usize) -> Self {
        Mesh { cells, grading: 0.0 }
    }

    pub fn graded(cells: usize, grading: f64) -> Self {
        Mesh { cells, grading }
    }

    fn map(&self, y: f64) -> f64 {
        y - 0.5 * self.grading * (2.0 * y).sin()
    }

    fn validate(&self) -> Result<(), FlowError> {
        if self.cells < 8 {
            return Err(FlowError::InvalidParameter { name: "cells", value: self.cells as f64 });
        }
        if !(0.0..1.0).contains(&self.grading) {
            return Err(FlowError::InvalidParameter { name: "grading", value: self.grading });
        }
        Ok(())
    }

    /// Cell centres, mirrored so the layout is exactly symmetric about `π/2`.
    pub fn centres(&self) -> Vec<f64> {
        let n = self.cells;
        let h = PI / n as f64;
        let mut x = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            x[k] = self.map((k as f64 + 0.5) * h);
            x[n - 1 - k] = PI - x[k];
        }
        if n % 2 == 1 {
            x[n / 2] = 0.5 * PI;
        }
        x
    }

    fn faces(&self) -> Vec<f64> {
        let n = self.cells;
        let h = PI / n as f64;
        let mut x = vec![0.0; n + 1];
        for k in 0..=n / 2 {
            x[k] = self.map(k as f64 * h);
            x[n - k] = PI - x[k];
        }
        x
    }
}

/// A rotationally symmetric metric `w(x)(dx² + sin²x dθ²)` on `S²` at time
/// `t`, sampled at the cell centres of a [`Mesh`].
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    t: f64,
    mesh: Mesh,
    x: Vec<f64>,
    w: Vec<f64>,
    /// Cell measure `∫ sin x dx` and face coupling `sin x_f / (x_{k+1} − x_k)`.
    mass: Vec<f64>,
    face: Vec<f64>,
}

impl FlowState {
    pub fn new(mesh: Mesh, t: f64, w: Vec<f64>) -> Result<Self, FlowError> {
        mesh.validate()?;
        let n = mesh.cells;
        if w.len() != n {
            return Err(FlowError::InvalidParameter { name: "w length", value: w.len() as f64 });
        }
        if let Some(index) = w.iter().position(|&x| !(x > 0.0) || !x.is_finite()) {
            return Err(FlowError::NonPositive { index });
        }
        let x = mesh.centres();
        let xf = mesh.faces();
        let mass = (0..n).map(|k| xf[k].cos() - xf[k + 1].cos()).collect();
        // faces 0 and n are the poles and carry no flux
        let face = (0..=n).map(|k| if k == 0 || k == n { 0.0 } else { xf[k].sin() / (x[k] - x[k - 1]) }).collect();
        Ok(FlowState { t, mesh, x, w, mass, face })
    }

    /// Round sphere of the given radius.
    pub fn round(radius: f64, mesh: Mesh) -> Result<Self, FlowError> {
        if !(radius > 0.0) {
            return Err(FlowError::InvalidParameter { name: "radius", value: radius });
        }
        FlowState::new(mesh, 0.0, vec![radius * radius; mesh.cells])
    }

    pub fn time(&self) -> f64 {
        self.t
    }
    pub fn cells(&self) -> usize {
        self.w.len()
    }
    pub fn mesh(&self) -> Mesh {
        self.mesh
    }
    pub fn conformal_factor(&self) -> &[f64] {
        &self.w
    }
    pub fn x(&self, k: usize) -> f64 {
        self.x[k]
    }

    /// Same metric scaled by `c`, i.e. `c·g`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.w.iter_mut().for_each(|w| *w *= c);
        s
    }

    /// Round-sphere Laplacian of `u = ½ ln w`, in conservative form.
    fn laplacian_u(&self) -> Vec<f64> {
        let n = self.w.len();
        let u: Vec<f64> = self.w.iter().map(|w| 0.5 * w.ln()).collect();
        (0..n)
            .map(|k| {
                let up = if k + 1 < n { self.face[k + 1] * (u[k + 1] - u[k]) } else { 0.0 };
                let dn = if k > 0 { self.face[k] * (u[k] - u[k - 1]) } else { 0.0 };
                (up - dn) / self.mass[k]
            })
            .collect()
    }

    /// Gauss curvature `K = (1 − Δu)/w` per cell.
    pub fn gauss_curvature(&self) -> Vec<f64> {
        self.laplacian_u().into_iter().zip(&self.w).map(|(l, w)| (1.0 - l) / w).collect()
    }

    pub fn k_min(&self) -> f64 {
        self.gauss_curvature().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn k_max(&self) -> f64 {
        self.gauss_curvature().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `K_max / K_min`; infinite when `K_min ≤ 0`.
    pub fn roundness(&self) -> f64 {
        let k = self.gauss_curvature();
        let lo = k.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if lo > 0.0 {
            hi / lo
        } else {
            f64::INFINITY
        }
    }

    /// `2π Σ w_k ∫_cell sin x dx`.
    pub fn area(&self) -> f64 {
        2.0 * PI * self.w.iter().zip(&self.mass).map(|(w, m)| w * m).sum::<f64>()
    }

    /// `∫ K dA`, which equals `4π` for every state.
    pub fn total_curvature(&self) -> f64 {
        let k = self.gauss_curvature();
        2.0 * PI * (0..k.len()).map(|j| k[j] * self.w[j] * self.mass[j]).sum::<f64>()
    }

    /// Largest explicit step for which the linearized update stays monotone,
    /// `min_k w_k m_k / (c_{k−½} + c_{k+½})`.
    pub fn stability_bound(&self) -> f64 {
        (0..self.w.len())
            .map(|k| self.w[k] * self.mass[k] / (self.face[k] + self.face[k + 1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Meridian as an arclength profile: `(ξ, b)` including both poles,
    /// with `ξ = ∫ √w dx` and `b = √w sin x`.
    pub fn arclength_profile(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.w.len();
        let mut xi = Vec::with_capacity(n + 2);
        let mut b = Vec::with_capacity(n + 2);
        xi.push(0.0);
        b.push(0.0);
        let mut acc = self.x[0] * self.w[0].sqrt();
        for k in 0..n {
            xi.push(acc);
            b.push(self.w[k].sqrt() * self.x[k].sin());
            acc += if k + 1 < n {
                0.5 * (self.w[k].sqrt() + self.w[k + 1].sqrt()) * (self.x[k + 1] - self.x[k])
            } else {
                (PI - self.x[k]) * self.w[k].sqrt()
            };
        }
        xi.push(acc);
        b.push(0.0);
        (xi, b)
    }

    /// Meridian length from pole to pole.
    pub fn length(&self) -> f64 {
        *self.arclength_profile().0.last().unwrap()
    }

    /// Forward Euler step of `w_t = 2(Δu − 1)`.
    pub fn ricci_flow_step(&self, dt: f64) -> Result<FlowState, FlowError> {
        let bound = self.stability_bound();
        if !(dt > 0.0) || dt > bound {
            return Err(FlowError::StepTooLarge { dt, suggested: 0.5 * bound });
        }
        let lap = self.laplacian_u();
        let mut next = self.clone();
        for (k, w) in next.w.iter_mut().enumerate() {
            *w += 2.0 * dt * (lap[k] - 1.0);
            if !(*w > 0.0) {
                return Err(FlowError::NonPositive { index: k });
            }
        }
        next.t += dt;
        Ok(next)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_geometry() {
        let s = FlowState::round(2.0, Mesh::uniform(64)).unwrap();
        assert!((s.area() - 16.0 * PI).abs() < 1e-12);
        assert!(s.gauss_curvature().iter().all(|k| (k - 0.25).abs() < 1e-14));
        assert!((s.roundness() - 1.0).abs() < 1e-14);
        // trapezoid in x on a constant factor is exact
        assert!((s.length() - 2.0 * PI).abs() < 1e-12);
        let g = FlowState::round(1.0, Mesh::graded(64, 0.8)).unwrap();
        assert!((g.area() - 4.0 * PI).abs() < 1e-12);
        assert!(g.gauss_curvature().iter().all(|k| (k - 1.0).abs() < 1e-13));
    }

    #[test]
    fn round_sphere_radius_law() {
        let mut s = FlowState::round(1.5, Mesh::graded(32, 0.5)).unwrap();
        let dt = 0.5 * s.stability_bound();
        for _ in 0..200 {
            s = s.ricci_flow_step(dt).unwrap();
        }
        let expect = 2.25 - 2.0 * s.time();
        assert!(s.conformal_factor().iter().all(|w| (w - expect).abs() < 1e-12));
    }

    #[test]
    fn rejects_unstable_step() {
        let s = FlowState::round(1.0, Mesh::uniform(32)).unwrap();
        match s.ricci_flow_step(2.0 * s.stability_bound()) {
            Err(FlowError::StepTooLarge { suggested, .. }) => assert!(suggested < s.stability_bound()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn gauss_bonnet_holds_for_any_factor() {
        let mesh = Mesh::graded(50, 0.7);
        let w: Vec<f64> = mesh.centres().iter().map(|x| 1.0 + 0.4 * x.cos().powi(2)).collect();
        let s = FlowState::new(mesh, 0.0, w).unwrap();
        assert!((s.total_curvature() - 4.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_factor() {
        let mut w = vec![1.0; 16];
        w[3] = 0.0;
        assert!(matches!(FlowState::new(Mesh::uniform(16), 0.0, w), Err(FlowError::NonPositive { index: 3 })));
        assert!(FlowState::round(1.0, Mesh::graded(16, 1.0)).is_err());
    }
}
