use crate::subject::{cigar_phi, interp, sech2, sphere_area, unit_ball_volume};
use crate::report::ls_slope;
use crate::{Subject, VerifyError};

/// Simpson's rule on `[a, b]` with `panels` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for j in 1..panels {
        acc += if j % 2 == 1 { 4.0 } else { 2.0 } * f(a + j as f64 * h);
    }
    acc * h / 3.0
}

/// `∫_{u² + ρ² ≤ s²} w(ρ) dρ du` for a density decaying or saturating in
/// `ρ`, via `ρ = s sin β`.
fn product_ball(w: impl Fn(f64) -> f64, s: f64) -> f64 {
    simpson(|b: f64| w(s * b.sin()) * 2.0 * s * s * b.cos().powi(2), 0.0, std::f64::consts::FRAC_PI_2, 4096)
}

/// Ball integrals `∫_{B(p,s)} R dvol`, with the boundary flux of `∇f`
/// where the potential is known in closed form or on a profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RGrowth {
    pub s: Vec<f64>,
    pub integral: Vec<f64>,
    /// `∫_{∂B(p,s)} ⟨∇f, ν⟩`, equal to the integral when `R = Δf`.
    pub flux: Option<Vec<f64>>,
    /// `min I(s)/s` over the last half of the samples.
    pub min_ratio: f64,
    /// Least-squares slope of `I` against `s` over the last half.
    pub slope: f64,
}

pub fn integral_r_growth(subject: &Subject, s: &[f64]) -> Result<RGrowth, VerifyError> {
    if s.len() < 2 {
        return Err(VerifyError::TooFewSamples { needed: 2, got: s.len() });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let (integral, flux): (Vec<f64>, Option<Vec<f64>>) = match subject {
        Subject::Flat => (vec![0.0; s.len()], Some(vec![0.0; s.len()])),
        Subject::LineTimesCigar => {
            let i = s.iter().map(|&x| product_ball(|r| sech2(r) * two_pi * cigar_phi(r), x)).collect();
            let fl = s
                .iter()
                .map(|&x| {
                    simpson(
                        |b: f64| {
                            let r = x * b.sin();
                            (0.5 * r).tanh() * b.sin() * two_pi * cigar_phi(r) * x
                        },
                        0.0,
                        std::f64::consts::PI,
                        4096,
                    )
                })
                .collect();
            (i, Some(fl))
        }
        Subject::Rotational(p) => {
            let m = p.dim() - 1;
            let area = sphere_area(m);
            let r = Subject::profile_scalar(p)?;
            let dens: Vec<f64> = (0..p.len()).map(|k| r[k] * area * p.warp()[k].powi(m as i32)).collect();
            let cum = geom_core::fd::cumulative_trapezoid(p.grid(), &dens);
            let mut i = Vec::with_capacity(s.len());
            let mut fl = Vec::with_capacity(s.len());
            for &x in s {
                if x > p.r_max() {
                    return Err(VerifyError::OutOfDomain { what: "ball radius", value: x, limit: p.r_max() });
                }
                i.push(interp(p.grid(), &cum, x));
                fl.push(area * p.warp_at(x).powi(m as i32) * p.potential_d1_at(x));
            }
            (i, Some(fl))
        }
        Subject::Grid { .. } => {
            let g = subject.grid_data()?.expect("grid subject");
            let d = g.distance_to_p();
            let w = cell_volumes(&g);
            let reach = max_ball(&g, &d);
            let mut i = Vec::with_capacity(s.len());
            for &x in s {
                if x > reach {
                    return Err(VerifyError::OutOfDomain { what: "ball radius", value: x, limit: reach });
                }
                i.push((0..w.len()).filter(|&k| d[k] <= x).map(|k| g.scalar[k] * w[k]).sum());
            }
            (i, None)
        }
    };
    let start = s.len() - s.len() / 2;
    let min_ratio = (start..s.len()).map(|k| integral[k] / s[k]).fold(f64::INFINITY, f64::min);
    let slope = ls_slope(&s[start..], &integral[start..]);
    Ok(RGrowth { s: s.to_vec(), integral, flux, min_ratio, slope })
}

/// `vol(B(p, r)) / (ω_n rⁿ)` at the sampled radii.
#[derive(Debug, Clone, PartialEq)]
pub struct AvrReport {
    pub r: Vec<f64>,
    pub ratio: Vec<f64>,
    /// `vol(B(p, 1)) / ω_n`.
    pub unit_ratio: f64,
}

impl AvrReport {
    /// The ratio is nonincreasing and its last value is below `level`.
    pub fn collapsing(&self, level: f64) -> bool {
        self.ratio.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9)) && *self.ratio.last().unwrap() < level
    }
}

pub fn avr_estimate(subject: &Subject, radii: &[f64]) -> Result<AvrReport, VerifyError> {
    if radii.is_empty() {
        return Err(VerifyError::TooFewSamples { needed: 1, got: 0 });
    }
    let n = subject.dim();
    let omega = unit_ball_volume(n);
    let mut all = radii.to_vec();
    all.push(1.0);
    let vols: Vec<f64> = match subject {
        Subject::Flat => all.iter().map(|r| omega * r.powi(3)).collect(),
        Subject::LineTimesCigar => {
            let two_pi = 2.0 * std::f64::consts::PI;
            all.iter().map(|&r| product_ball(|x| two_pi * cigar_phi(x), r)).collect()
        }
        Subject::Rotational(p) => {
            let m = p.dim() - 1;
            let dens: Vec<f64> = p.warp().iter().map(|w| sphere_area(m) * w.powi(m as i32)).collect();
            let cum = geom_core::fd::cumulative_trapezoid(p.grid(), &dens);
            let mut v = Vec::with_capacity(all.len());
            for &r in &all {
                if r > p.r_max() {
                    return Err(VerifyError::OutOfDomain { what: "ball radius", value: r, limit: p.r_max() });
                }
                v.push(interp(p.grid(), &cum, r));
            }
            v
        }
        Subject::Grid { .. } => {
            let g = subject.grid_data()?.expect("grid subject");
            let d = g.distance_to_p();
            let w = cell_volumes(&g);
            let reach = max_ball(&g, &d);
            let mut v = Vec::with_capacity(all.len());
            for &r in &all {
                if r > reach {
                    return Err(VerifyError::OutOfDomain { what: "ball radius", value: r, limit: reach });
                }
                v.push((0..w.len()).filter(|&k| d[k] <= r).map(|k| w[k]).sum());
            }
            v
        }
    };
    let unit_ratio = vols[vols.len() - 1] / omega;
    let ratio = radii.iter().zip(&vols).map(|(r, v)| v / (omega * r.powi(n as i32))).collect();
    Ok(AvrReport { r: radii.to_vec(), ratio, unit_ratio })
}

/// Volume carried by each lattice node: `√det g_N · |S^m| φ^m · hu hv`,
/// halved on a vertex-centred axis row.
fn cell_volumes(g: &crate::subject::GridData) -> Vec<f64> {
    let m = g.metric;
    let (nu, nv) = m.shape();
    let (hu, hv) = m.spacing();
    let area = sphere_area(g.fiber_dim);
    let vertex = m.layout() == geom_core::AxisLayout::Vertex;
    (0..nu * nv)
        .map(|k| {
            let det = m.g_uu()[k] * m.g_vv()[k] - m.g_uv()[k].powi(2);
            let wj = if vertex && k % nv == 0 { 0.5 } else { 1.0 };
            wj * det.sqrt() * area * m.phi()[k].abs().powi(g.fiber_dim as i32) * hu * hv
        })
        .collect()
}

/// Largest radius whose ball stays inside the lattice.
fn max_ball(g: &crate::subject::GridData, d: &[f64]) -> f64 {
    let m = g.metric;
    let (nu, nv) = m.shape();
    let mut edge = f64::INFINITY;
    for i in 0..nu {
        edge = edge.min(d[m.idx(i, nv - 1)]);
    }
    for j in 0..nv {
        edge = edge.min(d[m.idx(0, j)]).min(d[m.idx(nu - 1, j)]);
    }
    edge
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_space_has_unit_ratio_and_no_curvature() {
        let a = avr_estimate(&Subject::Flat, &[1.0, 10.0]).unwrap();
        assert!(a.ratio.iter().all(|r| (r - 1.0).abs() < 1e-14));
        let g = integral_r_growth(&Subject::Flat, &[1.0, 2.0]).unwrap();
        assert!(g.integral.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn line_times_cigar_integral_matches_flux() {
        let s = [5.0, 10.0, 20.0, 40.0, 80.0];
        let g = integral_r_growth(&Subject::LineTimesCigar, &s).unwrap();
        let fl = g.flux.as_ref().unwrap();
        for k in 0..s.len() {
            assert!((g.integral[k] - fl[k]).abs() < 1e-6 * fl[k], "{} {}", g.integral[k], fl[k]);
        }
        // 4π of curvature per unit length of the line, over a length 2s
        let limit = 8.0 * std::f64::consts::PI;
        assert!((g.integral[4] / 80.0 - limit).abs() < 0.1 * limit);
        assert!(g.min_ratio > 0.0);
    }

    #[test]
    fn line_times_cigar_collapses() {
        let a = avr_estimate(&Subject::LineTimesCigar, &[1.0, 10.0, 100.0, 1000.0]).unwrap();
        assert!(a.collapsing(0.01), "{a:?}");
        assert!(a.unit_ratio > 0.5);
    }

    #[test]
    fn simpson_integrates_cubics() {
        assert!((simpson(|x| x * x * x, 0.0, 2.0, 2) - 4.0).abs() < 1e-14);
    }
}
