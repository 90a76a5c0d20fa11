use crate::subject::{cigar_phi, interp};
use crate::{Subject, VerifyError};

/// Model the rescaled neighbourhood of `Γ(s)` is compared with, both
/// normalized to `R = 1` on the edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// `ℝ × cigar`, fiber radius `2 tanh(y/2)`.
    LineTimesCigar,
    /// `ℝ × S²(√2)`, fiber radius `√2 sin(y/√2)` up to the far pole.
    LineTimesSphere,
}

impl Reference {
    fn fiber(self, y: f64) -> Option<f64> {
        match self {
            Reference::LineTimesCigar => Some(cigar_phi(y)),
            Reference::LineTimesSphere => {
                let a = std::f64::consts::SQRT_2;
                (y <= std::f64::consts::PI * a).then(|| a * (y / a).sin())
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionProbe {
    /// `R(Γ(s))`, the rescaling factor.
    pub scale: f64,
    /// Ball radius in rescaled units.
    pub radius: f64,
    /// Largest coefficient difference in aligned coordinates.
    pub deviation: f64,
}

/// C⁰ distance between `R(Γ(s)) · g` on the ball of radius `1/ε` about
/// `Γ(s)` and the reference, in coordinates `(x, y, θ)` that are orthonormal
/// at `Γ(s)`: `x` along `Γ`, `y` normal to it inside the slice, `θ` the
/// fiber angle. The coefficients compared are `g_xx`, `g_xy`, `g_yy` and the
/// fiber radius. Only the time-zero slice is probed.
pub fn dimension_reduction_probe(
    subject: &Subject,
    s: f64,
    reference: Reference,
    eps: f64,
) -> Result<ReductionProbe, VerifyError> {
    if !(eps > 0.0) {
        return Err(VerifyError::OutOfDomain { what: "eps", value: eps, limit: f64::INFINITY });
    }
    let radius = 1.0 / eps;
    match subject {
        Subject::Flat => Err(VerifyError::Unsupported("flat space has no curvature scale")),
        Subject::LineTimesCigar => {
            let dev = sample_ball(radius, |_, y| Some(([1.0, 0.0, 1.0], cigar_phi(y))), reference);
            Ok(ReductionProbe { scale: 1.0, radius, deviation: dev })
        }
        Subject::Rotational(p) => {
            let r = Subject::profile_scalar(p)?;
            if s <= 0.0 || s > p.r_max() {
                return Err(VerifyError::OutOfDomain { what: "s along Γ", value: s, limit: p.r_max() });
            }
            let k = interp(p.grid(), &r, s);
            let root = k.sqrt();
            let reach = radius / root;
            if s - reach < 0.0 || s + reach > p.r_max() {
                return Err(VerifyError::OutOfDomain { what: "ball about Γ(s)", value: reach, limit: p.r_max() - s });
            }
            let phi_s = p.warp_at(s);
            let a = root * phi_s;
            let dev = sample_ball(
                radius,
                |x, y| {
                    // the slice through Γ(s) is the sphere of radius φ(r)
                    let psi = y / a;
                    if psi > std::f64::consts::PI {
                        return None;
                    }
                    let phi_r = p.warp_at(s + x / root);
                    Some(([1.0, 0.0, (phi_r / phi_s).powi(2)], root * phi_r * psi.sin()))
                },
                reference,
            );
            Ok(ReductionProbe { scale: k, radius, deviation: dev })
        }
        Subject::Grid { .. } => {
            let g = subject.grid_data()?.expect("grid subject");
            let m = g.metric;
            let (nu, nv) = m.shape();
            let i_s = (g.centre..nu)
                .min_by(|&a, &b| (g.gamma_s[a] - s).abs().total_cmp(&(g.gamma_s[b] - s).abs()))
                .unwrap_or(g.centre);
            let k0 = m.idx(i_s, 0);
            let k = g.scalar[k0];
            if !(k > 0.0) {
                return Err(VerifyError::Unsupported("nonpositive curvature at Γ(s)"));
            }
            let root = k.sqrt();
            let (a, b) = (m.g_uu()[k0].sqrt(), m.g_vv()[k0].sqrt());
            let (du, dv) = (radius / (root * a), radius / (root * b));
            let u_s = m.u(i_s);
            if u_s - du < m.u(0) || u_s + du > m.u(nu - 1) || dv > m.v(nv - 1) {
                let room = ((u_s - m.u(0)).min(m.u(nu - 1) - u_s) * a).min(m.v(nv - 1) * b) * root;
                return Err(VerifyError::OutOfDomain { what: "ball about Γ(s)", value: radius, limit: room });
            }
            let mut dev: f64 = 0.0;
            for i in 0..nu {
                for j in 0..nv {
                    let x = root * a * (m.u(i) - u_s);
                    let y = root * b * m.v(j);
                    if x * x + y * y > radius * radius {
                        continue;
                    }
                    let Some(fr) = reference.fiber(y) else { continue };
                    let q = m.idx(i, j);
                    let coeff = [m.g_uu()[q] / (a * a), m.g_uv()[q] / (a * b), m.g_vv()[q] / (b * b)];
                    dev = dev.max(coefficient_gap(coeff, root * m.phi()[q], fr));
                }
            }
            Ok(ReductionProbe { scale: k, radius, deviation: dev })
        }
    }
}

fn coefficient_gap(g: [f64; 3], fiber: f64, fiber_ref: f64) -> f64 {
    (g[0] - 1.0).abs().max(g[1].abs()).max((g[2] - 1.0).abs()).max((fiber - fiber_ref).abs())
}

/// Maximum gap over a 65 × 33 lattice on the half-disc `y ≥ 0`.
fn sample_ball(radius: f64, at: impl Fn(f64, f64) -> Option<([f64; 3], f64)>, reference: Reference) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..=64 {
        let x = radius * (i as f64 / 32.0 - 1.0);
        for j in 0..=32 {
            let y = radius * j as f64 / 32.0;
            if x * x + y * y > radius * radius {
                continue;
            }
            let (Some((g, fiber)), Some(fr)) = (at(x, y), reference.fiber(y)) else { continue };
            dev = dev.max(coefficient_gap(g, fiber, fr));
        }
    }
    dev
}
