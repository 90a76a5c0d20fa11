use std::io::Write;

use crate::clairaut::profile_distance;
use crate::{comparison_angle, CompError, Model};

pub const CONE_HEADER: [&str; 2] = ["s", "theta"];

/// Source of comparison triangles `(d(p, Γ(s)), d(p, Γ(−s)), d(Γ(s), Γ(−s)))`,
/// or of triangles spanning a fixed fraction of the cone.
pub trait ConeProbe {
    fn triangle(&self, s: f64) -> Result<[f64; 3], CompError>;
    /// Largest admissible `s`.
    fn max_scale(&self) -> f64;
    /// Ratio of the cone angle to the comparison angle at `p`; 2 when the
    /// second vertex lies on the symmetry axis of the cone.
    fn angle_factor(&self) -> f64 {
        1.0
    }
}

impl ConeProbe for Model<'_> {
    fn triangle(&self, s: f64) -> Result<[f64; 3], CompError> {
        if !(s > 0.0) || s > self.max_scale() {
            return Err(CompError::OutOfDomain {
                s,
                limit: self.max_scale(),
            });
        }
        match self {
            Model::Flat | Model::LineTimes(_) => Ok([s, s, 2.0 * s]),
            // the great circle through p closes after 2πR
            Model::Sphere { radius } => Ok([s, s, (2.0 * s).min(2.0 * std::f64::consts::PI * radius - 2.0 * s)]),
            Model::Rotational(w) => {
                Ok([s, s, profile_distance(w, s, s, std::f64::consts::PI)?.value])
            }
        }
    }

    fn max_scale(&self) -> f64 {
        match self {
            Model::Sphere { radius } => std::f64::consts::PI * radius,
            Model::Rotational(w) => w.r_limit(),
            Model::Flat | Model::LineTimes(_) => f64::INFINITY,
        }
    }
}

/// Comparison angles at increasing scales and the extrapolated cone angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeAngleEstimate {
    pub scales: Vec<f64>,
    /// Comparison angles times [`ConeProbe::angle_factor`].
    pub angles: Vec<f64>,
    /// Intercept of the least-squares line `θ = α + β/s` over the last
    /// half of the samples, clamped to `[0, π]`.
    pub alpha: f64,
    /// `θ_k` nonincreasing in `k` up to `1e-12`.
    pub monotone: bool,
}

impl ConeAngleEstimate {
    pub fn decreasing_trend(&self) -> bool {
        self.angles.last() < self.angles.first()
    }
}

/// Sample `θ(s)` at `s_k = s_max (k + 1)/samples` and extrapolate to `s → ∞`.
pub fn estimate_cone_angle(
    probe: &dyn ConeProbe,
    s_max: f64,
    samples: usize,
) -> Result<ConeAngleEstimate, CompError> {
    if samples < 4 {
        return Err(CompError::TooFewSamples {
            needed: 4,
            got: samples,
        });
    }
    if !(s_max > 0.0) || s_max > probe.max_scale() {
        return Err(CompError::OutOfDomain {
            s: s_max,
            limit: probe.max_scale(),
        });
    }
    let scales: Vec<f64> = (1..=samples)
        .map(|k| s_max * k as f64 / samples as f64)
        .collect();
    let mut angles = Vec::with_capacity(samples);
    for &s in &scales {
        let [a, b, c] = probe.triangle(s)?;
        angles.push(probe.angle_factor() * comparison_angle(a, b, c)?);
    }
    let tail = samples / 2;
    let xs: Vec<f64> = scales[samples - tail..].iter().map(|s| 1.0 / s).collect();
    let ys = &angles[samples - tail..];
    let n = tail as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let alpha = (my - slope * mx).clamp(0.0, std::f64::consts::PI);
    let monotone = angles.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    Ok(ConeAngleEstimate {
        scales,
        angles,
        alpha,
        monotone,
    })
}

/// `s,theta` rows followed by a `# alpha = …` footer line.
pub fn write_cone_csv<W: Write>(mut out: W, est: &ConeAngleEstimate) -> Result<(), CompError> {
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(CONE_HEADER)?;
        for (s, t) in est.scales.iter().zip(&est.angles) {
            w.write_record([format!("{s:e}"), format!("{t:e}")])?;
        }
        w.flush()?;
    }
    writeln!(out, "# alpha = {:e}", est.alpha)?;
    Ok(())
}
