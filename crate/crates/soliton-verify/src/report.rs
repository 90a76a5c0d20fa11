use std::io::Write;

use crate::VerifyError;

pub const IDENTITY_HEADER: [&str; 5] = ["name", "max_deviation", "location", "tolerance", "pass"];

/// Outcome of one gated identity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub name: String,
    pub max_deviation: f64,
    /// Flat sample index (or station index) of the largest deviation.
    pub location: usize,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, max_deviation: f64, location: usize, tolerance: f64) -> Self {
        // NaN deviations fail
        let pass = max_deviation <= tolerance;
        IdentityReport { name: name.into(), max_deviation, location, tolerance, pass }
    }

    /// Largest `|d_k|` over a sequence, with its index.
    pub fn from_deviations(
        name: impl Into<String>,
        deviations: impl IntoIterator<Item = f64>,
        tolerance: f64,
    ) -> Self {
        let mut worst = (0.0, 0);
        for (k, d) in deviations.into_iter().enumerate() {
            let d = d.abs();
            if d > worst.0 || d.is_nan() {
                worst = (d, k);
                if d.is_nan() {
                    break;
                }
            }
        }
        IdentityReport::new(name, worst.0, worst.1, tolerance)
    }
}

/// Shape of a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Constant,
    Nonincreasing,
    Nondecreasing,
    Mixed,
}

impl Trend {
    pub fn of(values: &[f64]) -> Trend {
        let up = values.windows(2).any(|w| w[1] > w[0]);
        let down = values.windows(2).any(|w| w[1] < w[0]);
        match (up, down) {
            (false, false) => Trend::Constant,
            (false, true) => Trend::Nonincreasing,
            (true, false) => Trend::Nondecreasing,
            (true, true) => Trend::Mixed,
        }
    }
}

pub fn write_identity_csv<W: Write>(out: W, reports: &[IdentityReport]) -> Result<(), VerifyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(IDENTITY_HEADER)?;
    for r in reports {
        w.write_record([
            r.name.clone(),
            format!("{:e}", r.max_deviation),
            r.location.to_string(),
            format!("{:e}", r.tolerance),
            r.pass.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Plain-text summary, one line per report.
pub fn summary(reports: &[IdentityReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&format!(
            "{:<24} {}  deviation={:.3e}  tol={:.1e}  at={}\n",
            r.name,
            if r.pass { "PASS" } else { "FAIL" },
            r.max_deviation,
            r.tolerance,
            r.location
        ));
    }
    s
}

/// Least-squares slope of `y` against `x`.
pub(crate) fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    sxy / sxx
}

/// Log-log slope over the last half of the samples.
pub(crate) fn tail_exponent(s: &[f64], h: &[f64]) -> f64 {
    let start = s.len() - s.len() / 2;
    let x: Vec<f64> = s[start..].iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = h[start..].iter().map(|v| v.ln()).collect();
    ls_slope(&x, &y)
}
