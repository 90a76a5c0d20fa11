use geom_core::RadialProfile;

use crate::CompError;

/// Warp `φ(r)` of a rotationally symmetric metric `dr² + φ(r)² dθ²`.
#[derive(Debug, Clone, Copy)]
pub enum Warp<'a> {
    /// `2 tanh(r/2)`, with exact differences.
    Cigar,
    /// `φ = r`.
    Flat,
    /// Hermite interpolant of a sampled profile.
    Sampled(&'a RadialProfile),
}

impl Warp<'_> {
    pub fn phi(&self, r: f64) -> f64 {
        match self {
            Warp::Cigar => 2.0 * (0.5 * r).tanh(),
            Warp::Flat => r,
            Warp::Sampled(p) => p.warp_at(r),
        }
    }

    pub fn dphi(&self, r: f64) -> f64 {
        match self {
            Warp::Cigar => (0.5 * r).cosh().powi(-2),
            Warp::Flat => 1.0,
            Warp::Sampled(p) => p.warp_d1_at(r),
        }
    }

    /// `φ(r₀ + d) − φ(r₀)` for `d ≥ 0`, exact for the cigar where the
    /// difference of two saturated `tanh` values would cancel.
    fn diff(&self, r0: f64, d: f64) -> f64 {
        match self {
            Warp::Cigar => 2.0 * (0.5 * d).sinh() / ((0.5 * (r0 + d)).cosh() * (0.5 * r0).cosh()),
            Warp::Flat => d,
            Warp::Sampled(_) => {
                let v = self.phi(r0 + d) - self.phi(r0);
                if v > 0.0 {
                    v
                } else {
                    self.dphi(r0) * d
                }
            }
        }
    }

    /// Largest radius at which the warp is known.
    pub fn r_limit(&self) -> f64 {
        match self {
            Warp::Sampled(p) => p.r_max(),
            _ => f64::INFINITY,
        }
    }
}

/// A distance with bounds: `lower ≤ d ≤ upper` up to quadrature error
/// estimated from two resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distance {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Distance {
    pub fn exact(d: f64) -> Self {
        Distance {
            value: d,
            lower: d,
            upper: d,
        }
    }
}

/// Geodesics from `(r_lo, 0)` to `(r_hi, ·)`, `r_lo ≤ r_hi`, in one parameter
/// `t ∈ [0, 2]`: for `t ≤ 1` monotone in `r` with Clairaut constant
/// `L = t φ(r_lo)`; for `t > 1` dipping to a turning radius
/// `r* = (1 − σ) r_lo`, `σ = 10^(TURN_DECADES (t − 2))`, with `L = φ(r*)`.
/// The logarithmic `σ` resolves turning points within `1e-17 r_lo` of
/// `r_lo`, where nearly cylindrical warps sweep most of their angle.
struct Family<'w, 'a> {
    warp: &'w Warp<'a>,
    r_lo: f64,
    r_hi: f64,
}

const TURN_DECADES: f64 = 17.0;

#[derive(Debug, Clone, Copy)]
struct Sweep {
    angle: f64,
    length: f64,
}

impl Family<'_, '_> {
    /// `∫ (L/φ, φ) · 2w / √((φ − L)(φ + L)) dw` over `r = base + w²`,
    /// `w ∈ [0, √span]`, where `gap = φ(base) − L ≥ 0`.
    fn leg(&self, base: f64, span: f64, l: f64, gap: f64, panels: usize) -> Sweep {
        let top = span.max(0.0).sqrt();
        if top == 0.0 {
            return Sweep {
                angle: 0.0,
                length: 0.0,
            };
        }
        let f = |w: f64| -> (f64, f64) {
            let r = base + w * w;
            let phi = self.warp.phi(r);
            let k = if w == 0.0 {
                if gap > 0.0 {
                    0.0
                } else {
                    // turning point: φ − L ≈ φ′(r*) w²
                    2.0 / (self.warp.dphi(base) * 2.0 * l).sqrt()
                }
            } else {
                2.0 * w / ((self.warp.diff(base, w * w) + gap) * (phi + l)).sqrt()
            };
            (l / phi * k, phi * k)
        };
        let h = top / panels as f64;
        let (mut a, mut s) = (0.0, 0.0);
        for j in 0..=panels {
            let wgt = if j == 0 || j == panels {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let (fa, fs) = f(j as f64 * h);
            a += wgt * fa;
            s += wgt * fs;
        }
        Sweep {
            angle: a * h / 3.0,
            length: s * h / 3.0,
        }
    }

    fn sweep(&self, t: f64, panels: usize) -> Sweep {
        if t <= 1.0 {
            let phi_lo = self.warp.phi(self.r_lo);
            let l = t * phi_lo;
            self.leg(self.r_lo, self.r_hi - self.r_lo, l, phi_lo - l, panels)
        } else {
            let sigma = 10f64.powf(TURN_DECADES * (t - 2.0));
            // the dip is carried exactly; r* itself may round
            let dip = sigma * self.r_lo;
            let r_star = self.r_lo - dip;
            let l = self.warp.phi(r_star);
            let a = self.leg(r_star, dip, l, 0.0, panels);
            let b = self.leg(r_star, self.r_hi - self.r_lo + dip, l, 0.0, panels);
            Sweep {
                angle: a.angle + b.angle,
                length: a.length + b.length,
            }
        }
    }
}

/// Scan points in `t`: dense toward `t = 1` on the monotone side, uniform
/// in `log σ` plus uniform in `σ` on the turning side.
fn scan_points() -> Vec<f64> {
    let mut taus = Vec::new();
    for k in 0..=40 {
        taus.push(k as f64 / 40.0 * 0.9);
    }
    for k in 1..=60 {
        taus.push(1.0 - 0.1 * 10f64.powf(-(k as f64) / 5.0));
    }
    taus.push(1.0);
    let mut turning: Vec<f64> = (1..=200).map(|k| 1.0 + k as f64 / 200.0).collect();
    turning.extend((1..40).map(|k| 2.0 + (k as f64 / 40.0).log10() / TURN_DECADES));
    turning.sort_by(f64::total_cmp);
    turning.dedup();
    taus.extend(turning);
    taus
}

/// Distance between `(r1, 0)` and `(r2, dθ)` in `dr² + φ(r)² dθ²`, by the
/// Clairaut reduction: every geodesic joining the points with swept angle
/// `dθ` is located by bisection on the family parameter, and the shortest
/// is kept. The path through the tip (length `r1 + r2`) is always a
/// competitor.
pub fn profile_distance(warp: &Warp, r1: f64, r2: f64, dtheta: f64) -> Result<Distance, CompError> {
    const PANELS: usize = 256;
    let dtheta = dtheta.rem_euclid(2.0 * std::f64::consts::PI);
    let dtheta = dtheta.min(2.0 * std::f64::consts::PI - dtheta);
    let (r_lo, r_hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if r_lo < 0.0 || r_hi > warp.r_limit() {
        return Err(CompError::OutOfDomain {
            s: r_hi,
            limit: warp.r_limit(),
        });
    }
    if r_lo == 0.0 || dtheta == 0.0 {
        return Ok(Distance::exact(r_hi - r_lo));
    }
    let through_tip = r_lo + r_hi;
    let fam = Family { warp, r_lo, r_hi };
    let taus = scan_points();
    let vals: Vec<Sweep> = taus.iter().map(|&t| fam.sweep(t, PANELS)).collect();
    let mut best: Option<(f64, f64)> = None;
    for k in 0..taus.len() - 1 {
        let (g0, g1) = (vals[k].angle - dtheta, vals[k + 1].angle - dtheta);
        if !(g0.is_finite() && g1.is_finite()) || g0.signum() == g1.signum() && g0 != 0.0 {
            continue;
        }
        let (mut lo, mut hi, mut glo) = (taus[k], taus[k + 1], g0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let g = fam.sweep(mid, PANELS).angle - dtheta;
            if g.signum() == glo.signum() {
                lo = mid;
                glo = g;
            } else {
                hi = mid;
            }
        }
        let tau = 0.5 * (lo + hi);
        let fine = fam.sweep(tau, PANELS).length;
        let coarse = fam.sweep(tau, PANELS / 2).length;
        let err = (fine - coarse).abs();
        if best.is_none_or(|(v, _)| fine < v) {
            best = Some((fine, err));
        }
    }
    let radial = r_hi - r_lo;
    match best {
        Some((v, e)) if v < through_tip => Ok(Distance {
            value: v,
            lower: (v - e).max(radial),
            upper: (v + e).min(through_tip),
        }),
        // the broken path through the tip is a geodesic only for antipodal directions
        _ if dtheta >= std::f64::consts::PI - 1e-12 => Ok(Distance::exact(through_tip)),
        _ => Ok(Distance {
            value: through_tip,
            lower: radial,
            upper: through_tip,
        }),
    }
}
