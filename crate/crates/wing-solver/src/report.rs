use std::io::{self, Write};

use soliton_verify::{
    dimension_reduction_probe, h_diagnostics, hamilton_identity, soliton_residual, EdgeDiagnostics, Fields,
    IdentityReport, ReductionProbe, Reference, Subject,
};

use crate::newton::WingSolution;
use crate::WingError;

/// Gate on the spread of `R + |∇f|²`.
pub const HAMILTON_TOL: f64 = 1e-3;
/// Gate on `Ric − ∇²f`, which on a converged solution is the gauge term.
pub const SOLITON_TOL: f64 = 1e-3;
/// Lower bound on sectional curvature over the interior, negated.
pub const SEC_TOL: f64 = 1e-3;
/// Upper bound on the eigenvalues of `∇²φ`.
pub const CONCAVITY_TOL: f64 = 1e-4;
/// Gate on `|R(Γ(s_edge))/R(p) − sin²(α_est/2)|`.
pub const EDGE_TOL: f64 = 0.1;
/// Rescaled radius of the dimension-reduction balls.
const PROBE_RADIUS: f64 = 1.5;
/// Station fractions of `s_edge`, pulled in on short domains.
const PROBE_STATIONS: [f64; 3] = [0.25, 0.5, 0.75];
const SIGMA_SAMPLES: usize = 16;

/// Consistency numbers of a converged wing.
#[derive(Debug, Clone)]
pub struct WingReport {
    pub alpha0: f64,
    pub alpha_est: f64,
    pub iterations: usize,
    pub final_residual: f64,
    pub scalar_at_p: f64,
    pub s_edge: f64,
    /// `R(Γ(s_edge)) / R(p)`.
    pub edge_ratio: f64,
    /// `sin²(α_est/2)`.
    pub edge_target: f64,
    pub hamilton: IdentityReport,
    pub soliton: IdentityReport,
    /// Smallest sectional curvature over the interior.
    pub sec_min: f64,
    pub sec_min_at: usize,
    /// Largest eigenvalue of `∇²φ` over the interior.
    pub concavity: f64,
    pub concavity_at: usize,
    /// `max |φ_v / √g_vv − 1|` on the first row, the cone defect at the axis.
    pub axis_defect: f64,
    /// `(s, probe)` against `ℝ × cigar` at stations along `Γ`.
    pub probes: Vec<(f64, ReductionProbe)>,
    /// `h₁`, `h₂` along `γ`.
    pub edge: EdgeDiagnostics,
}

impl WingReport {
    pub fn edge_gap(&self) -> f64 {
        (self.edge_ratio - self.edge_target).abs()
    }

    /// Largest increase of the probe deviation between consecutive
    /// stations; zero when it decreases along `Γ`.
    pub fn probe_rise(&self) -> f64 {
        self.probes.windows(2).map(|w| w[1].1.deviation - w[0].1.deviation).fold(0.0, f64::max)
    }

    pub fn probes_decrease(&self) -> bool {
        self.probes.len() > 1 && self.probes.windows(2).all(|w| w[1].1.deviation < w[0].1.deviation)
    }

    /// The gated properties of a converged wing, in report order.
    pub fn gates(&self) -> Vec<IdentityReport> {
        let rise = self.probe_rise();
        vec![
            self.hamilton.clone(),
            IdentityReport::new("sec_min", (-self.sec_min).max(0.0), self.sec_min_at, SEC_TOL),
            IdentityReport::new("concavity", self.concavity.max(0.0), self.concavity_at, CONCAVITY_TOL),
            IdentityReport::new("edge_limit", self.edge_gap(), 0, EDGE_TOL),
            IdentityReport {
                pass: self.probes_decrease(),
                ..IdentityReport::new("reduction_decrease", rise, 0, 0.0)
            },
        ]
    }

    /// `min h₁h₂/s` over the sampled range.
    pub fn h1h2_floor(&self) -> f64 {
        self.edge.h1h2_over_s().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `min h₁h₂/s` over the last dyadic range against the one before it.
    pub fn h1h2_dyadic(&self) -> f64 {
        let q = self.edge.h1h2_over_s();
        let top = *self.edge.s.last().expect("nonempty");
        let min_over = |lo: f64, hi: f64| {
            self.edge
                .s
                .iter()
                .zip(&q)
                .filter(|(s, _)| **s > lo && **s <= hi)
                .map(|(_, x)| *x)
                .fold(f64::INFINITY, f64::min)
        };
        min_over(top / 2.0, top) / min_over(top / 4.0, top / 2.0)
    }

    /// Flat `"key": value` summary, fixed key order.
    pub fn write_summary<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut rows: Vec<(String, String)> = vec![
            ("alpha0".into(), num(self.alpha0)),
            ("alpha_est".into(), num(self.alpha_est)),
            ("newton_iterations".into(), self.iterations.to_string()),
            ("final_residual".into(), num(self.final_residual)),
            ("R_p".into(), num(self.scalar_at_p)),
            ("s_edge".into(), num(self.s_edge)),
            ("edge_ratio".into(), num(self.edge_ratio)),
            ("edge_target".into(), num(self.edge_target)),
            ("edge_gap".into(), num(self.edge_gap())),
            ("hamilton_spread".into(), num(self.hamilton.max_deviation)),
            ("soliton_residual".into(), num(self.soliton.max_deviation)),
            ("sec_min".into(), num(self.sec_min)),
            ("hess_phi_max".into(), num(self.concavity)),
            ("axis_defect".into(), num(self.axis_defect)),
        ];
        for (s, p) in &self.probes {
            rows.push((format!("probe_s{s:.3}"), num(p.deviation)));
        }
        rows.push(("h1h2_over_s_min".into(), num(self.h1h2_floor())));
        rows.push(("h1h2_dyadic".into(), num(self.h1h2_dyadic())));
        rows.push(("h1_exponent".into(), num(self.edge.h1_exponent)));
        rows.push(("h2_exponent".into(), num(self.edge.h2_exponent)));
        writeln!(out, "{{")?;
        for (k, (key, val)) in rows.iter().enumerate() {
            let comma = if k + 1 < rows.len() { "," } else { "" };
            writeln!(out, "  \"{key}\": {val}{comma}")?;
        }
        writeln!(out, "}}")
    }
}

fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:e}")
    } else {
        "null".into()
    }
}

pub fn wing_report(sol: &WingSolution) -> Result<WingReport, WingError> {
    let m = &sol.metric;
    let fields = Fields::Warped { metric: m, fiber_dim: 1 };
    let hamilton = hamilton_identity(fields, HAMILTON_TOL)?;
    let soliton = soliton_residual(fields, SOLITON_TOL)?;

    let (nu, nv) = m.shape();
    let interior = || (1..nu - 1).flat_map(move |i| (0..nv - 1).map(move |j| i * nv + j));
    let curv = m.curvature(1)?;
    let (sec_min, sec_min_at) = interior()
        .flat_map(|k| curv.sectional.iter().map(move |f| (f.min[k], k)))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a });
    let geo = m.base_geometry();
    let (concavity, concavity_at) = interior()
        .map(|k| (geo[k].eigs(geo[k].hess_phi)[1], k))
        .fold((f64::NEG_INFINITY, 0), |a, b| if b.0 > a.0 { b } else { a });

    let st = &sol.state;
    let axis_defect =
        (0..st.nu).map(|i| ((st.get(3, i, 0) / st.get(2, i, 0)).sqrt() - 1.0).abs()).fold(0.0, f64::max);

    let meas = &sol.measured;
    let subject = Subject::Grid { metric: m, fiber_dim: 1 };
    // stations spread over the part of Γ whose balls fit inside the lattice
    let top = (meas.s_edge - 2.0 * PROBE_RADIUS).min(PROBE_STATIONS[2] * meas.s_edge);
    let probes = PROBE_STATIONS
        .iter()
        .map(|q| {
            let s = q / PROBE_STATIONS[2] * top;
            dimension_reduction_probe(&subject, s, Reference::LineTimesCigar, 1.0 / PROBE_RADIUS).map(|p| (s, p))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let column = column_length(m);
    let stations: Vec<f64> =
        (1..=SIGMA_SAMPLES).map(|k| 0.9 * column * k as f64 / SIGMA_SAMPLES as f64).collect();
    let edge = h_diagnostics(&subject, &stations)?;

    Ok(WingReport {
        alpha0: sol.problem.alpha0,
        alpha_est: sol.alpha_est(),
        iterations: sol.iterations(),
        final_residual: sol.final_residual(),
        scalar_at_p: meas.scalar_at_p,
        s_edge: meas.s_edge,
        edge_ratio: meas.scalar_at_edge / meas.scalar_at_p,
        edge_target: (0.5 * sol.alpha_est()).sin().powi(2),
        hamilton,
        soliton,
        sec_min,
        sec_min_at,
        concavity,
        concavity_at,
        axis_defect,
        probes,
        edge,
    })
}

/// Arclength of the column `u = 0` from the axis to the top row.
fn column_length(m: &geom_core::WarpedHalfPlaneMetric) -> f64 {
    let (_, nv) = m.shape();
    let (_, hv) = m.spacing();
    let c = m.nearest_u(0.0);
    let root = |j: usize| m.g_vv()[m.idx(c, j)].sqrt();
    m.v(0) * root(0) + (1..nv).map(|j| 0.5 * hv * (root(j) + root(j - 1))).sum::<f64>()
}
