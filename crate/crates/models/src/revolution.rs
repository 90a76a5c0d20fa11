use std::f64::consts::PI;

use geom_core::fd::{self, Parity};
use geom_core::{GeomError, SolitonFields};

use crate::ModelError;

/// The surface of revolution `(i⁻¹ sin r cos θ, i⁻¹ sin r sin θ, r)`,
/// `r ∈ [0, π]`, with induced metric `a(r)² dr² + b(r)² dθ²`,
/// `a = √(1 + i⁻² cos² r)` and `b = i⁻¹ sin r`.
///
/// The poles are cone points of the embedding; the Gauss curvature of the
/// smooth part `K = (1 + i⁻² cos² r)⁻²` extends continuously to them.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurface {
    pub i: f64,
    pub r: Vec<f64>,
    pub a: Vec<f64>,
    pub a1: Vec<f64>,
    pub b: Vec<f64>,
    pub b1: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Sample the surface on `nodes` equally spaced parameters in `[0, π]`.
pub fn revolution_surface(i: f64, nodes: usize) -> Result<RevolutionSurface, ModelError> {
    if !(i > 0.0) || !i.is_finite() {
        return Err(ModelError::InvalidParameter { name: "i", value: i });
    }
    if nodes < 8 {
        return Err(ModelError::InvalidParameter { name: "nodes", value: nodes as f64 });
    }
    let h = PI / (nodes - 1) as f64;
    let r: Vec<f64> = (0..nodes).map(|k| if k == nodes - 1 { PI } else { k as f64 * h }).collect();
    let s = RevolutionSurface {
        i,
        a: r.iter().map(|&x| RevolutionSurface::stretch(i, x)).collect(),
        a1: r
            .iter()
            .map(|&x| -x.sin() * x.cos() / (i * i * RevolutionSurface::stretch(i, x)))
            .collect(),
        b: r.iter().map(|&x| x.sin() / i).collect(),
        b1: r.iter().map(|&x| x.cos() / i).collect(),
        b2: r.iter().map(|&x| -x.sin() / i).collect(),
        r,
    };
    Ok(s)
}

impl RevolutionSurface {
    /// `a(r) = √(1 + i⁻² cos² r)`.
    pub fn stretch(i: f64, r: f64) -> f64 {
        (1.0 + (r.cos() / i).powi(2)).sqrt()
    }

    /// Closed-form Gauss curvature.
    pub fn exact_gauss(i: f64, r: f64) -> f64 {
        (1.0 + (r.cos() / i).powi(2)).powi(-2)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    fn assemble(&self, a: &[f64], a1: &[f64], b: &[f64], b1: &[f64], b2: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut k: Vec<f64> = (0..n)
            .map(|m| -b2[m] / (a[m] * a[m] * b[m]) + a1[m] * b1[m] / (a[m].powi(3) * b[m]))
            .collect();
        // poles: K is even about r = 0 and r = π
        let r = &self.r;
        k[0] = fd::even_extrapolate3([r[1], r[2], r[3]], [k[1], k[2], k[3]]);
        let far = [PI - r[n - 2], PI - r[n - 3], PI - r[n - 4]];
        k[n - 1] = fd::even_extrapolate3(far, [k[n - 2], k[n - 3], k[n - 4]]);
        k
    }

    /// Gauss curvature `−(1/ab)(b'/a)'` from the stored analytic derivatives,
    /// with the exact limit `a⁻⁴` at the poles.
    pub fn gauss_curvature(&self) -> Vec<f64> {
        let mut k = self.assemble(&self.a, &self.a1, &self.b, &self.b1, &self.b2);
        let n = k.len();
        k[0] = self.a[0].powi(-4);
        k[n - 1] = self.a[n - 1].powi(-4);
        k
    }

    /// Gauss curvature with every derivative replaced by second-order
    /// differences (parity ghosts at both poles).
    pub fn gauss_curvature_differenced(&self) -> Vec<f64> {
        let (a1, _) = both_poles(&self.r, &self.a, Parity::Even);
        let (b1, b2) = both_poles(&self.r, &self.b, Parity::Odd);
        self.assemble(&self.a, &a1, &self.b, &b1, &b2)
    }

    pub fn k_min(&self) -> f64 {
        self.gauss_curvature().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn k_max(&self) -> f64 {
        self.gauss_curvature().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `K_max / K_min`.
    pub fn roundness(&self) -> f64 {
        self.k_max() / self.k_min()
    }

    /// `2π ∫ a b dr`.
    pub fn area(&self) -> f64 {
        let w: Vec<f64> = self.a.iter().zip(&self.b).map(|(a, b)| a * b).collect();
        2.0 * PI * fd::simpson_uniform(self.r[1] - self.r[0], &w)
    }
}

/// Derivatives of a field that has the given parity about both `r = 0`
/// and `r = π`.
fn both_poles(r: &[f64], y: &[f64], p: Parity) -> (Vec<f64>, Vec<f64>) {
    let n = r.len();
    let (lo1, lo2) = fd::derivatives(r, y, Some(p));
    let rr: Vec<f64> = r.iter().rev().map(|x| PI - x).collect();
    let yr: Vec<f64> = y.iter().rev().copied().collect();
    let (hi1, hi2) = fd::derivatives(&rr, &yr, Some(p));
    let mut d1 = lo1;
    let mut d2 = lo2;
    for m in n / 2..n {
        d1[m] = -hi1[n - 1 - m];
        d2[m] = hi2[n - 1 - m];
    }
    (d1, d2)
}

impl SolitonFields for RevolutionSurface {
    fn scalar_curvature(&self) -> Result<Vec<f64>, GeomError> {
        Ok(self.gauss_curvature().into_iter().map(|k| 2.0 * k).collect())
    }

    /// The surface carries no potential (`f ≡ 0`).
    fn potential_gradient_norm(&self) -> Result<Vec<f64>, GeomError> {
        Ok(vec![0.0; self.len()])
    }
}
