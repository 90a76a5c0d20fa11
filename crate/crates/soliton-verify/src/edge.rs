use std::io::Write;

use crate::report::tail_exponent;
use crate::{Subject, VerifyError};

pub const EDGE_HEADER: [&str; 7] = ["s", "h1", "h2", "R_gamma", "R_Gamma", "h1sq_R", "h1h2_over_s"];

/// `h₁(s) = d(γ(s), Γ)`, `h₂(s) = φ(γ(s))` and curvatures along `γ` and `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeDiagnostics {
    pub s: Vec<f64>,
    pub h1: Vec<f64>,
    pub h2: Vec<f64>,
    /// `R(γ(s))`.
    pub scalar_sigma: Vec<f64>,
    /// `R(Γ(s))`.
    pub scalar_gamma: Vec<f64>,
    /// Log-log slopes over the last half of the samples.
    pub h1_exponent: f64,
    pub h2_exponent: f64,
}

impl EdgeDiagnostics {
    /// `h₁² R(γ)`.
    pub fn h1sq_r(&self) -> Vec<f64> {
        self.h1.iter().zip(&self.scalar_sigma).map(|(h, r)| h * h * r).collect()
    }

    /// `h₁ h₂ / s`.
    pub fn h1h2_over_s(&self) -> Vec<f64> {
        (0..self.s.len()).map(|k| self.h1[k] * self.h2[k] / self.s[k]).collect()
    }

    /// `max_{s ≤ s_max} q / max_{s ≤ s_max/2} q` for a sampled quantity.
    pub fn dyadic_ratio(&self, q: &[f64]) -> f64 {
        let half = *self.s.last().expect("nonempty") / 2.0;
        let all = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lower = self.s.iter().zip(q).filter(|(s, _)| **s <= half).map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
        all / lower
    }

    /// Largest positive second difference of `h₂`, scaled by the spacing.
    pub fn h2_concavity_violation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 1..self.s.len() - 1 {
            let (a, b) = (self.s[k] - self.s[k - 1], self.s[k + 1] - self.s[k]);
            let d2 = 2.0 * ((self.h2[k + 1] - self.h2[k]) / b - (self.h2[k] - self.h2[k - 1]) / a) / (a + b);
            worst = worst.max(d2);
        }
        worst
    }
}

pub fn h_diagnostics(subject: &Subject, s: &[f64]) -> Result<EdgeDiagnostics, VerifyError> {
    if s.len() < 8 {
        return Err(VerifyError::TooFewSamples { needed: 8, got: s.len() });
    }
    let st = subject.sigma_stations(s)?;
    let (_, scalar_gamma) = subject.scalar_along_gamma(s)?;
    let h1: Vec<f64> = st.iter().map(|x| x.h1).collect();
    let h2: Vec<f64> = st.iter().map(|x| x.h2).collect();
    Ok(EdgeDiagnostics {
        s: s.to_vec(),
        h1_exponent: tail_exponent(s, &h1),
        h2_exponent: tail_exponent(s, &h2),
        scalar_sigma: st.iter().map(|x| x.scalar).collect(),
        scalar_gamma,
        h1,
        h2,
    })
}

pub fn write_edge_csv<W: Write>(out: W, d: &EdgeDiagnostics) -> Result<(), VerifyError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EDGE_HEADER)?;
    let (a, b) = (d.h1sq_r(), d.h1h2_over_s());
    for k in 0..d.s.len() {
        let row = [d.s[k], d.h1[k], d.h2[k], d.scalar_sigma[k], d.scalar_gamma[k], a[k], b[k]];
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic(s_max: f64, n: usize) -> Vec<f64> {
        (1..=n).map(|k| s_max * k as f64 / n as f64).collect()
    }

    #[test]
    fn line_times_cigar() {
        let d = h_diagnostics(&Subject::LineTimesCigar, &dyadic(200.0, 16)).unwrap();
        assert!((d.h1_exponent - 1.0).abs() < 1e-12);
        assert!(d.h2_exponent.abs() < 1e-6);
        assert!((d.h2.last().unwrap() - 2.0).abs() < 1e-12);
        assert!(d.dyadic_ratio(&d.h1sq_r()) < 1.2);
        assert!(d.h2_concavity_violation() <= 0.0);
    }

    #[test]
    fn short_grids_rejected() {
        assert!(h_diagnostics(&Subject::Flat, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn csv_layout() {
        let d = h_diagnostics(&Subject::Flat, &dyadic(8.0, 8)).unwrap();
        let mut buf = Vec::new();
        write_edge_csv(&mut buf, &d).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("s,h1,h2,R_gamma,R_Gamma,h1sq_R,h1h2_over_s\n"));
        assert_eq!(text.lines().count(), 9);
    }
}
