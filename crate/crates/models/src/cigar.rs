use geom_core::RadialProfile;

use crate::ModelError;

/// Limit of the cigar warp, `lim_{ρ→∞} 2 tanh(ρ/2)`.
pub const CIGAR_ASYMPTOTIC_WARP: f64 = 2.0;

/// `ln cosh x` without overflow for large `|x|`.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

pub(crate) fn uniform_grid(r_max: f64, step: f64) -> Result<Vec<f64>, ModelError> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(ModelError::InvalidParameter { name: "r_max", value: r_max });
    }
    if !(step > 0.0) || step > r_max {
        return Err(ModelError::InvalidParameter { name: "step", value: step });
    }
    let n = (r_max / step).round() as usize;
    Ok((0..=n).map(|k| if k == n { r_max } else { k as f64 * step }).collect())
}

/// The cigar `dρ² + 4 tanh²(ρ/2) dθ²` with potential `2 ln cosh(ρ/2)`,
/// normalized so that `R = 1` at the tip. Derivatives are analytic.
pub fn cigar_profile(r_max: f64, step: f64) -> Result<RadialProfile, ModelError> {
    let g = uniform_grid(r_max, step)?;
    let mut phi = Vec::with_capacity(g.len());
    let mut phi1 = Vec::with_capacity(g.len());
    let mut phi2 = Vec::with_capacity(g.len());
    let mut f = Vec::with_capacity(g.len());
    let mut f1 = Vec::with_capacity(g.len());
    let mut f2 = Vec::with_capacity(g.len());
    for &r in &g {
        let t = (r / 2.0).tanh();
        let s2 = 1.0 - t * t;
        phi.push(2.0 * t);
        phi1.push(s2);
        phi2.push(-s2 * t);
        f.push(2.0 * ln_cosh(r / 2.0));
        f1.push(t);
        f2.push(0.5 * s2);
    }
    Ok(RadialProfile::with_derivatives(2, g, (phi, phi1, phi2), (f, f1, f2))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tip_values() {
        let p = cigar_profile(10.0, 0.01).unwrap();
        assert_eq!(p.warp()[0], 0.0);
        assert_eq!(p.warp_d1()[0], 1.0);
        let rep = p.curvature().unwrap();
        assert!((rep.scalar[0] - 1.0).abs() < 1e-12);
        assert_eq!(p.grid().len(), 1001);
        assert_eq!(p.r_max(), 10.0);
    }

    #[test]
    fn warp_tends_to_two() {
        let p = cigar_profile(60.0, 0.5).unwrap();
        assert!((p.warp().last().unwrap() - CIGAR_ASYMPTOTIC_WARP).abs() < 1e-12);
    }

    #[test]
    fn ln_cosh_is_stable() {
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
        assert!((ln_cosh(1000.0) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-9);
        assert_eq!(ln_cosh(0.0), 0.0);
    }

    #[test]
    fn bad_parameters() {
        assert!(cigar_profile(-1.0, 0.1).is_err());
        assert!(cigar_profile(1.0, 0.0).is_err());
    }
}
