use geom_core::RadialProfile;

use crate::cigar::uniform_grid;
use crate::ode::{StepError, Stepper, Tolerances};
use crate::ModelError;

/// Settings for [`bryant_shoot`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingConfig {
    /// Manifold dimension, at least 3.
    pub n: usize,
    /// Output sample spacing.
    pub step: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Bracket for the cubic warp coefficient `a` in `φ = r + a r³ + …`.
    pub bracket: (f64, f64),
    pub r_max: f64,
    /// Target scalar curvature at the tip.
    pub r_tip: f64,
}

impl ShootingConfig {
    /// Defaults for dimension `n`; the bracket spans a factor 4 around the
    /// normalized coefficient.
    pub fn new(n: usize) -> Self {
        let nn = n as f64;
        let a = -1.0 / (6.0 * nn * (nn - 1.0));
        ShootingConfig { n, step: 1e-3, rtol: 1e-11, atol: 1e-13, bracket: (2.0 * a, 0.5 * a), r_max: 100.0, r_tip: 1.0 }
    }
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig::new(3)
    }
}

/// Shooting result: the profile plus bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingOutcome {
    pub profile: RadialProfile,
    /// Converged cubic warp coefficient.
    pub warp_coefficient: f64,
    /// Final shooting discrepancy.
    pub discrepancy: f64,
    pub iterations: usize,
}

/// Rotationally symmetric steady soliton system in `(φ, η, f', f)` with
/// `η = φ' − 1`, which keeps `1 − φ'² = −η(2 + η)` free of cancellation
/// near the tip.
fn rhs(n: f64, y: &[f64; 4]) -> [f64; 4] {
    let (phi, eta, xi) = (y[0], y[1], y[2]);
    let deta = -(1.0 + eta) * xi - (n - 2.0) * eta * (2.0 + eta) / phi;
    let dxi = -(n - 1.0) * deta / phi;
    [1.0 + eta, deta, dxi, xi]
}

/// `R + f'²` at a state.
fn conserved(n: f64, y: &[f64; 4]) -> f64 {
    let d = rhs(n, y);
    let (phi, eta, xi) = (y[0], y[1], y[2]);
    let r = -2.0 * (n - 1.0) * d[1] / phi - (n - 1.0) * (n - 2.0) * eta * (2.0 + eta) / (phi * phi);
    r + xi * xi
}

/// Series coefficients at the tip: `φ = r + a r³ + c r⁵`,
/// `f' = b r + d r³`, with `b = R_tip / n` fixed by the normalization.
#[derive(Debug, Clone, Copy)]
struct Series {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Series {
    fn new(n: f64, a: f64, b: f64) -> Self {
        // smoothness fixes the fifth-order terms given (a, b); with b
        // inconsistent with a the start lies slightly off the smooth branch
        let a_s = -b / (6.0 * (n - 1.0));
        let c = 3.0 * (13.0 * n - 10.0) * a_s * a_s / (10.0 * (n + 2.0));
        let d = -(n - 1.0) * (20.0 * c - 6.0 * a_s * a_s) / 3.0;
        Series { a, b, c, d }
    }

    fn state(&self, r: f64) -> [f64; 4] {
        let (r2, r3) = (r * r, r * r * r);
        [
            r + self.a * r3 + self.c * r3 * r2,
            3.0 * self.a * r2 + 5.0 * self.c * r2 * r2,
            self.b * r + self.d * r3,
            0.5 * self.b * r2 + 0.25 * self.d * r2 * r2,
        ]
    }

    fn second_derivatives(&self, r: f64) -> (f64, f64) {
        (6.0 * self.a * r + 20.0 * self.c * r * r * r, self.b + 3.0 * self.d * r * r)
    }
}

struct Start {
    r0: f64,
    series: Series,
}

fn start(cfg: &ShootingConfig, a: f64) -> Start {
    let n = cfg.n as f64;
    let r0 = (0.5 * cfg.step).min(1e-3);
    Start { r0, series: Series::new(n, a, cfg.r_tip / n) }
}

fn step_failure(e: StepError) -> ModelError {
    match e {
        StepError::StepUnderflow { t } => ModelError::StepFailure { r: t, reason: "step size underflow" },
        StepError::NonFinite { t } => ModelError::StepFailure { r: t, reason: "non-finite state" },
    }
}

fn tolerances(cfg: &ShootingConfig) -> Tolerances {
    Tolerances { rtol: cfg.rtol, atol: cfg.atol, h_min: 1e-13 }
}

/// Shooting discrepancy `R + f'² − R_tip` at `r_max`, or at the last good
/// radius if the trajectory breaks down earlier (the quantity is conserved
/// along exact trajectories, so either place measures the same defect).
fn discrepancy(cfg: &ShootingConfig, a: f64) -> f64 {
    let n = cfg.n as f64;
    let s = start(cfg, a);
    let mut st = Stepper::new(|_r, y: &[f64; 4]| rhs(n, y), tolerances(cfg), s.r0);
    let (mut r, mut y) = (s.r0, s.series.state(s.r0));
    let mut last = y;
    let mut target = s.r0;
    while r < cfg.r_max {
        target = (target * 2.0).min(cfg.r_max);
        if st.advance(&mut r, &mut y, target).is_err() || y[0] <= 0.0 {
            break;
        }
        last = y;
    }
    conserved(n, &last) - cfg.r_tip
}

/// Bryant soliton by shooting on the cubic warp coefficient.
///
/// The potential's Hessian at the tip is fixed by the normalization, so the
/// remaining freedom is the warp coefficient `a`; smoothness at the tip
/// holds only when the conserved quantity `R + |∇f|²` equals `R_tip`, which
/// is the discrepancy bisected on.
pub fn bryant_shoot(cfg: &ShootingConfig) -> Result<ShootingOutcome, ModelError> {
    if cfg.n < 3 {
        return Err(ModelError::InvalidParameter { name: "n", value: cfg.n as f64 });
    }
    if !(cfg.r_tip > 0.0) {
        return Err(ModelError::InvalidParameter { name: "r_tip", value: cfg.r_tip });
    }
    let grid = uniform_grid(cfg.r_max, cfg.step)?;
    let (mut lo, mut hi) = cfg.bracket;
    let (mut d_lo, d_hi) = (discrepancy(cfg, lo), discrepancy(cfg, hi));
    if !(d_lo.is_finite() && d_hi.is_finite()) || d_lo.signum() == d_hi.signum() {
        return Err(ModelError::BracketNoSignChange { lo, hi, d_lo, d_hi });
    }
    let mut iterations = 0;
    while iterations < 200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let d = discrepancy(cfg, mid);
        iterations += 1;
        if d == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if d.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    let final_d = discrepancy(cfg, a);
    let profile = sample(cfg, a, &grid)?;
    Ok(ShootingOutcome { profile, warp_coefficient: a, discrepancy: final_d, iterations })
}

fn sample(cfg: &ShootingConfig, a: f64, grid: &[f64]) -> Result<RadialProfile, ModelError> {
    let n = cfg.n as f64;
    let s = start(cfg, a);
    let b = cfg.r_tip / n;
    let mut st = Stepper::new(|_r, y: &[f64; 4]| rhs(n, y), tolerances(cfg), s.r0);
    let (mut r, mut y) = (s.r0, s.series.state(s.r0));
    let k = grid.len();
    let (mut phi, mut phi1, mut phi2) = (Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k));
    let (mut f, mut f1, mut f2) = (Vec::with_capacity(k), Vec::with_capacity(k), Vec::with_capacity(k));
    for &rk in grid {
        if rk == 0.0 {
            phi.push(0.0);
            phi1.push(1.0);
            phi2.push(0.0);
            f.push(0.0);
            f1.push(0.0);
            f2.push(b);
            continue;
        }
        let (yk, dpsi, dxi) = if rk <= s.r0 {
            let (p2, x2) = s.series.second_derivatives(rk);
            (s.series.state(rk), p2, x2)
        } else {
            st.advance(&mut r, &mut y, rk).map_err(step_failure)?;
            if y[0] <= 0.0 {
                return Err(ModelError::StepFailure { r, reason: "warp reached zero" });
            }
            let d = rhs(n, &y);
            (y, d[1], d[2])
        };
        phi.push(yk[0]);
        phi1.push(1.0 + yk[1]);
        phi2.push(dpsi);
        f.push(yk[3]);
        f1.push(yk[2]);
        f2.push(dxi);
    }
    Ok(RadialProfile::with_derivatives(cfg.n, grid.to_vec(), (phi, phi1, phi2), (f, f1, f2))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(n: usize) -> ShootingConfig {
        ShootingConfig { step: 0.01, r_max: 20.0, ..ShootingConfig::new(n) }
    }

    #[test]
    fn conserved_quantity_at_series_start_is_linear_in_a() {
        let cfg = quick(3);
        let a_star = -1.0 / 36.0;
        assert!(discrepancy(&cfg, a_star).abs() < 1e-6);
        assert!(discrepancy(&cfg, 2.0 * a_star) < 0.0);
        assert!(discrepancy(&cfg, 0.5 * a_star) > 0.0);
    }

    #[test]
    fn shooting_recovers_normalized_coefficient() {
        for n in [3, 4] {
            let out = bryant_shoot(&quick(n)).unwrap();
            let nn = n as f64;
            let a = -1.0 / (6.0 * nn * (nn - 1.0));
            assert!((out.warp_coefficient - a).abs() < 1e-8 * a.abs(), "n={n}: {}", out.warp_coefficient);
            let rep = out.profile.curvature().unwrap();
            assert!((rep.scalar[0] - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn isotropic_ricci_at_tip() {
        let out = bryant_shoot(&quick(3)).unwrap();
        let (lr, ls) = out.profile.ricci_diag().unwrap();
        assert!((lr[0] / ls[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn bad_bracket_is_reported() {
        let cfg = ShootingConfig { bracket: (-0.01, -0.001), ..quick(3) };
        assert!(matches!(bryant_shoot(&cfg), Err(ModelError::BracketNoSignChange { .. })));
        let cfg = ShootingConfig { n: 2, ..quick(3) };
        assert!(bryant_shoot(&cfg).is_err());
    }

    #[test]
    fn deterministic() {
        let a = bryant_shoot(&quick(3)).unwrap();
        let b = bryant_shoot(&quick(3)).unwrap();
        assert_eq!(a, b);
    }
}
