use crate::fd::{self, Parity};
use crate::report::{ConcavityReport, CurvatureReport, SectionalFamily};
use crate::{GeomError, Result, SolitonFields};

/// Tolerance on `φ'(0) = 1` for axis-regular profiles, on top of the
/// `O(r₁²)` differencing error.
const AXIS_SLOPE_TOL: f64 = 1e-4;

/// Rotationally symmetric metric `dr² + φ(r)² g_{S^{n-1}}` with potential `f(r)`.
///
/// When the grid starts at `r = 0` the profile is treated as closing up
/// smoothly on the axis: `φ` odd and `f` even under `r ↦ −r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    n: usize,
    grid: Vec<f64>,
    warp: Vec<f64>,
    warp_d1: Vec<f64>,
    warp_d2: Vec<f64>,
    potential: Vec<f64>,
    potential_d1: Vec<f64>,
    potential_d2: Vec<f64>,
}

fn check_len(field: &'static str, v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(GeomError::LengthMismatch { field, got: v.len(), expected });
    }
    Ok(())
}

impl RadialProfile {
    /// Profile from samples; derivatives are filled by finite differences.
    pub fn from_samples(n: usize, grid: Vec<f64>, warp: Vec<f64>, potential: Vec<f64>) -> Result<Self> {
        Self::validate_shape(n, &grid)?;
        check_len("warp", &warp, grid.len())?;
        check_len("potential", &potential, grid.len())?;
        let axis = grid[0] == 0.0;
        let (warp_d1, warp_d2) = fd::derivatives(&grid, &warp, axis.then_some(Parity::Odd));
        let (potential_d1, potential_d2) = fd::derivatives(&grid, &potential, axis.then_some(Parity::Even));
        let p = RadialProfile { n, grid, warp, warp_d1, warp_d2, potential, potential_d1, potential_d2 };
        p.validate_values()?;
        Ok(p)
    }

    /// Profile with derivatives supplied by the caller, `(value, d1, d2)` each.
    pub fn with_derivatives(
        n: usize,
        grid: Vec<f64>,
        warp: (Vec<f64>, Vec<f64>, Vec<f64>),
        potential: (Vec<f64>, Vec<f64>, Vec<f64>),
    ) -> Result<Self> {
        Self::validate_shape(n, &grid)?;
        let k = grid.len();
        check_len("warp", &warp.0, k)?;
        check_len("warp_d1", &warp.1, k)?;
        check_len("warp_d2", &warp.2, k)?;
        check_len("potential", &potential.0, k)?;
        check_len("potential_d1", &potential.1, k)?;
        check_len("potential_d2", &potential.2, k)?;
        let p = RadialProfile {
            n,
            grid,
            warp: warp.0,
            warp_d1: warp.1,
            warp_d2: warp.2,
            potential: potential.0,
            potential_d1: potential.1,
            potential_d2: potential.2,
        };
        p.validate_values()?;
        Ok(p)
    }

    /// Same samples with every derivative recomputed by differencing.
    pub fn redifferenced(&self) -> Result<Self> {
        Self::from_samples(self.n, self.grid.clone(), self.warp.clone(), self.potential.clone())
    }

    fn validate_shape(n: usize, grid: &[f64]) -> Result<()> {
        if n < 2 {
            return Err(GeomError::BadDimension(n));
        }
        if grid.len() < 4 {
            return Err(GeomError::TooFewSamples { needed: 4, got: grid.len() });
        }
        if grid[0] < 0.0 {
            return Err(GeomError::NonMonotoneGrid { index: 0 });
        }
        for k in 1..grid.len() {
            if !(grid[k] > grid[k - 1]) {
                return Err(GeomError::NonMonotoneGrid { index: k });
            }
        }
        Ok(())
    }

    fn validate_values(&self) -> Result<()> {
        for (k, (&r, &phi)) in self.grid.iter().zip(&self.warp).enumerate() {
            if r == 0.0 {
                if phi != 0.0 {
                    return Err(GeomError::AxisWarpNonzero { index: k, value: phi });
                }
            } else if !(phi > 0.0) {
                return Err(GeomError::NonPositiveWarp { index: k, value: phi });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.n
    }
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
    pub fn warp(&self) -> &[f64] {
        &self.warp
    }
    pub fn warp_d1(&self) -> &[f64] {
        &self.warp_d1
    }
    pub fn warp_d2(&self) -> &[f64] {
        &self.warp_d2
    }
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }
    pub fn potential_d1(&self) -> &[f64] {
        &self.potential_d1
    }
    pub fn potential_d2(&self) -> &[f64] {
        &self.potential_d2
    }
    pub fn len(&self) -> usize {
        self.grid.len()
    }
    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }
    pub fn r_max(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    /// True when the grid starts on the axis.
    pub fn touches_axis(&self) -> bool {
        self.grid[0] == 0.0
    }

    fn check_axis(&self) -> Result<()> {
        if self.touches_axis() && (self.warp_d1[0] - 1.0).abs() > AXIS_SLOPE_TOL + self.grid[1].powi(2) {
            return Err(GeomError::AxisSingularity { slope: self.warp_d1[0] });
        }
        Ok(())
    }

    /// Fill the axis sample of a per-node quantity by even extrapolation.
    fn close_axis(&self, q: &mut [f64]) {
        if self.touches_axis() {
            let g = &self.grid;
            q[0] = fd::even_extrapolate3([g[1], g[2], g[3]], [q[1], q[2], q[3]]);
        }
    }

    /// Radial (`−φ''/φ`) and spherical (`(1−φ'²)/φ²`) sectional curvatures.
    pub fn sectional_curvatures(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_axis()?;
        let mut rad: Vec<f64> = (0..self.len()).map(|k| -self.warp_d2[k] / self.warp[k]).collect();
        let mut sph: Vec<f64> =
            (0..self.len()).map(|k| (1.0 - self.warp_d1[k].powi(2)) / self.warp[k].powi(2)).collect();
        self.close_axis(&mut rad);
        self.close_axis(&mut sph);
        Ok((rad, sph))
    }

    /// Ricci eigenvalues `(λ_radial, λ_spherical)`; the spherical one has
    /// multiplicity `n − 1`.
    pub fn ricci_diag(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let (rad, sph) = self.sectional_curvatures()?;
        let n = self.n as f64;
        if self.n == 2 {
            return Ok((rad.clone(), rad));
        }
        let lr = rad.iter().map(|k| (n - 1.0) * k).collect();
        let ls = rad.iter().zip(&sph).map(|(kr, ks)| kr + (n - 2.0) * ks).collect();
        Ok((lr, ls))
    }

    /// Hessian of the carried potential, `(f'', φ' f'/φ)`.
    pub fn hessian_potential_diag(&self) -> (Vec<f64>, Vec<f64>) {
        let mut sph: Vec<f64> =
            (0..self.len()).map(|k| self.warp_d1[k] * self.potential_d1[k] / self.warp[k]).collect();
        if self.touches_axis() {
            sph[0] = self.potential_d2[0];
        }
        (self.potential_d2.clone(), sph)
    }

    /// Curvature report for the profile.
    pub fn curvature(&self) -> Result<CurvatureReport> {
        let (rad, sph) = self.sectional_curvatures()?;
        let (lr, ls) = self.ricci_diag()?;
        let eigs = lr
            .iter()
            .zip(&ls)
            .map(|(&a, &b)| {
                let mut e = vec![a];
                e.extend(std::iter::repeat(b).take(self.n - 1));
                e
            })
            .collect();
        let mut families = vec![];
        if self.n == 2 {
            families.push(SectionalFamily { name: "gauss", min: rad.clone(), max: rad });
        } else {
            families.push(SectionalFamily { name: "radial", min: rad.clone(), max: rad });
            families.push(SectionalFamily { name: "spherical", min: sph.clone(), max: sph });
        }
        Ok(CurvatureReport::assemble(eigs, families))
    }

    /// `φ''` tested against zero.
    pub fn concavity(&self) -> ConcavityReport {
        ConcavityReport::from_eigs(self.warp_d2.iter().copied())
    }

    /// `|∇f|` for an arbitrary function sampled on this grid (`f` taken even
    /// across the axis).
    pub fn gradient_norm(&self, f: &[f64]) -> Result<Vec<f64>> {
        check_len("f", f, self.len())?;
        let axis = self.touches_axis().then_some(Parity::Even);
        Ok(fd::derivative(&self.grid, f, axis).into_iter().map(f64::abs).collect())
    }

    /// Locate the grid cell holding `r` (clamped to the ends).
    fn cell(&self, r: f64) -> usize {
        match self.grid.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(k) => k.min(self.len() - 2),
            Err(0) => 0,
            Err(k) => (k - 1).min(self.len() - 2),
        }
    }

    fn hermite(&self, r: f64, y: &[f64], dy: &[f64]) -> f64 {
        let k = self.cell(r);
        let (x0, x1) = (self.grid[k], self.grid[k + 1]);
        let h = x1 - x0;
        let t = (r - x0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * y[k] + h10 * h * dy[k] + h01 * y[k + 1] + h11 * h * dy[k + 1]
    }

    /// Cubic Hermite interpolant of `φ` using the carried `φ'`.
    pub fn warp_at(&self, r: f64) -> f64 {
        self.hermite(r, &self.warp, &self.warp_d1)
    }

    /// Cubic Hermite interpolant of `φ'` using the carried `φ''`.
    pub fn warp_d1_at(&self, r: f64) -> f64 {
        self.hermite(r, &self.warp_d1, &self.warp_d2)
    }

    /// Cubic Hermite interpolant of `f`.
    pub fn potential_at(&self, r: f64) -> f64 {
        self.hermite(r, &self.potential, &self.potential_d1)
    }

    /// Cubic Hermite interpolant of `f'`.
    pub fn potential_d1_at(&self, r: f64) -> f64 {
        self.hermite(r, &self.potential_d1, &self.potential_d2)
    }
}

impl SolitonFields for RadialProfile {
    fn scalar_curvature(&self) -> Result<Vec<f64>> {
        Ok(self.curvature()?.scalar)
    }

    fn potential_gradient_norm(&self) -> Result<Vec<f64>> {
        Ok(self.potential_d1.iter().map(|d| d.abs()).collect())
    }
}
