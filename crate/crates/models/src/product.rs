use geom_core::{RadialProfile, WarpedHalfPlaneMetric};

use crate::ModelError;

fn uniform_spacing(p: &RadialProfile) -> Result<f64, ModelError> {
    let g = p.grid();
    let h = g[1] - g[0];
    for k in 2..g.len() {
        if ((g[k] - g[k - 1]) - h).abs() > 1e-9 * h.max(1.0) {
            return Err(ModelError::NonUniformGrid { index: k });
        }
    }
    Ok(h)
}

/// `ℝ × (2D profile)`: flat base in `(u, ρ)` with `u ∈ [−U, U]`, warp and
/// potential copied from the profile. The `u` spacing equals the profile's.
pub fn product_with_line(profile: &RadialProfile, half_length: f64) -> Result<WarpedHalfPlaneMetric, ModelError> {
    if profile.dim() != 2 {
        return Err(ModelError::InvalidParameter { name: "profile dimension", value: profile.dim() as f64 });
    }
    if !(half_length > 0.0) {
        return Err(ModelError::InvalidParameter { name: "half_length", value: half_length });
    }
    let h = uniform_spacing(profile)?;
    let half = (half_length / h).round() as usize;
    let nu = 2 * half + 1;
    let nv = profile.len();
    let n = nu * nv;
    let mut phi = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for _ in 0..nu {
        phi.extend_from_slice(profile.warp());
        f.extend_from_slice(profile.potential());
    }
    Ok(WarpedHalfPlaneMetric::new(
        (-(half as f64) * h, h, nu),
        (profile.grid()[0], h, nv),
        vec![1.0; n],
        vec![0.0; n],
        vec![1.0; n],
        phi,
        f,
    )?)
}

/// A 3D rotationally symmetric profile written as a `Z₂ × O(2)`-symmetric
/// warped half-plane: `(u, v) = r (cos ψ, sin ψ)` in a meridian plane, base
/// metric `dr² + φ² dψ²`, warp `φ(r) sin ψ`.
pub fn rotational_to_warped(
    profile: &RadialProfile,
    half_length: f64,
    height: f64,
    h: f64,
) -> Result<WarpedHalfPlaneMetric, ModelError> {
    if profile.dim() != 3 {
        return Err(ModelError::InvalidParameter { name: "profile dimension", value: profile.dim() as f64 });
    }
    if !(h > 0.0) {
        return Err(ModelError::InvalidParameter { name: "h", value: h });
    }
    let half = (half_length / h).round() as usize;
    let nu = 2 * half + 1;
    let nv = (height / h).round() as usize + 1;
    let reach = ((half as f64 * h).powi(2) + ((nv - 1) as f64 * h).powi(2)).sqrt();
    if reach > profile.r_max() {
        return Err(ModelError::InvalidParameter { name: "lattice reach beyond profile", value: reach });
    }
    let n = nu * nv;
    let (mut a, mut b, mut c) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut phi, mut f) = (vec![0.0; n], vec![0.0; n]);
    for i in 0..nu {
        let u = (i as f64 - half as f64) * h;
        for j in 0..nv {
            let v = j as f64 * h;
            let k = i * nv + j;
            let r = (u * u + v * v).sqrt();
            if r == 0.0 {
                a[k] = 1.0;
                c[k] = 1.0;
                f[k] = profile.potential()[0];
                continue;
            }
            let w = profile.warp_at(r);
            let q = (w / r).powi(2);
            let (cu, cv) = (u / r, v / r);
            a[k] = cu * cu + q * (1.0 - cu * cu);
            b[k] = (1.0 - q) * cu * cv;
            c[k] = cv * cv + q * (1.0 - cv * cv);
            phi[k] = if j == 0 { 0.0 } else { w * cv };
            f[k] = profile.potential_at(r);
        }
    }
    Ok(WarpedHalfPlaneMetric::new((-(half as f64) * h, h, nu), (0.0, h, nv), a, b, c, phi, f)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cigar_profile;

    #[test]
    fn product_is_u_independent() {
        let p = cigar_profile(10.0, 0.05).unwrap();
        let m = product_with_line(&p, 1.0).unwrap();
        let (nu, nv) = m.shape();
        assert_eq!(nu, 41);
        let rep = m.curvature(1).unwrap();
        for i in 0..nu {
            for j in 0..nv {
                assert!((rep.scalar[i * nv + j] - rep.scalar[20 * nv + j]).abs() < 1e-9);
            }
        }
        let e1 = (rep.scalar[m.idx(20, 0)] - 1.0).abs();
        let fine = product_with_line(&cigar_profile(10.0, 0.025).unwrap(), 1.0).unwrap();
        let e2 = (fine.curvature(1).unwrap().scalar[fine.idx(40, 0)] - 1.0).abs();
        assert!(e1 < 1e-3 && e1 / e2 > 3.5, "{e1} {e2}");
    }

    #[test]
    fn flat_profile_gives_flat_warped_metric() {
        let g: Vec<f64> = (0..=400).map(|k| k as f64 * 0.025).collect();
        let p = RadialProfile::from_samples(3, g.clone(), g, vec![0.0; 401]).unwrap();
        let m = rotational_to_warped(&p, 3.0, 3.0, 0.1).unwrap();
        let rep = m.curvature(1).unwrap();
        assert!(rep.scalar.iter().all(|r| r.abs() < 1e-9));
        assert!(m.g_uv().iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn nonuniform_profile_rejected() {
        let g = vec![0.0, 0.1, 0.3, 0.4, 0.5];
        let phi = g.clone();
        let p = RadialProfile::from_samples(2, g, phi, vec![0.0; 5]).unwrap();
        assert!(matches!(product_with_line(&p, 1.0), Err(ModelError::NonUniformGrid { index: 2 })));
    }
}
