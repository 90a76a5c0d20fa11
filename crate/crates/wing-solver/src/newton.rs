use comparison_geom::{estimate_cone_angle, ConeAngleEstimate, ConeProbe, GridProbe, GridTriangle};
use geom_core::WarpedHalfPlaneMetric;
use soliton_verify::Subject;

use crate::problem::{WingProblem, WingState};
use crate::residual::{max_norm, Discretization};
use crate::WingError;

/// Smallest damping factor tried before a step is declared failed.
const MIN_STEP: f64 = 1.0 / 64.0;
/// Comparison triangles sampled for the cone angle.
const CONE_SAMPLES: usize = 16;
/// Reach of the lattice distance graph.
pub(crate) const GRAPH_REACH: usize = 3;

/// Converged fields with their residual history and edge measurements.
#[derive(Debug, Clone)]
pub struct WingSolution {
    pub problem: WingProblem,
    pub state: WingState,
    /// Max-norm residual of every iterate, the initial guess first.
    pub history: Vec<f64>,
    /// Damping factor of each accepted step.
    pub damping: Vec<f64>,
    /// The solution mirrored onto the full strip `−U ≤ u ≤ U`.
    pub metric: WarpedHalfPlaneMetric,
    pub measured: Measured,
}

/// Quantities read off a solution along `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Measured {
    pub scalar_at_p: f64,
    /// Arclength along `Γ` of the last node inside the Dirichlet boundary.
    pub s_edge: f64,
    pub scalar_at_edge: f64,
    /// Cone angle from the half-cone triangles `p, Γ(s), γ(s)` with
    /// lattice distances, which stay inside the domain.
    pub cone: ConeAngleEstimate,
}

impl WingSolution {
    pub fn alpha_est(&self) -> f64 {
        self.measured.cone.alpha
    }

    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }

    pub fn final_residual(&self) -> f64 {
        *self.history.last().expect("history starts with the initial guess")
    }
}

/// Damped Newton from the bent-product background.
///
/// A step `x − λ δ` is accepted when the state stays positive and the
/// residual decreases; `λ` halves from 1 down to 1/64.
pub fn newton_solve(problem: &WingProblem) -> Result<WingSolution, WingError> {
    let disc = Discretization::new(problem)?;
    let mut x = disc.background().clone();
    let mut r = disc.residual(&x)?;
    let mut history = vec![max_norm(&r)];
    let mut damping = Vec::new();
    loop {
        let rn = *history.last().expect("nonempty");
        if rn < problem.tol {
            break;
        }
        if damping.len() == problem.max_iter {
            return Err(WingError::NoConvergence { iterations: damping.len(), residual: rn, tol: problem.tol });
        }
        let sys = disc.assemble(&x)?;
        let dx = sys.jacobian.solve(&r)?;
        let mut lam = 1.0;
        let mut positivity = None;
        let accepted = loop {
            let mut trial = x.clone();
            for (t, d) in trial.data.iter_mut().zip(&dx) {
                *t -= lam * d;
            }
            match disc.residual(&trial) {
                Ok(rt) if max_norm(&rt) < rn => break Some((trial, rt)),
                Ok(_) => {}
                Err(e @ WingError::Positivity { .. }) => positivity = Some(e),
                Err(e) => return Err(e),
            }
            lam *= 0.5;
            if lam < MIN_STEP {
                break None;
            }
        };
        let Some((trial, rt)) = accepted else {
            return Err(positivity.unwrap_or(WingError::Stagnation { iterations: damping.len(), residual: rn }));
        };
        x = trial;
        history.push(max_norm(&rt));
        r = rt;
        damping.push(lam);
    }
    let metric = to_metric(problem, &x)?;
    let measured = measure(&metric)?;
    Ok(WingSolution { problem: problem.clone(), state: x, history, damping, metric, measured })
}

/// Mirror the half-strip state across `Σ` onto a cell-centred lattice
/// metric with `g_uv = v F̃` and `φ = v √C`.
pub fn to_metric(problem: &WingProblem, state: &WingState) -> Result<WarpedHalfPlaneMetric, WingError> {
    let (nu, nv) = (state.nu, state.nv);
    let full = 2 * nu - 1;
    let h = problem.spacing();
    let n = full * nv;
    let mut fields = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for ii in 0..full {
        let (i, sign) = if ii < nu - 1 { (nu - 1 - ii, -1.0) } else { (ii - (nu - 1), 1.0) };
        for j in 0..nv {
            let k = ii * nv + j;
            let v = problem.v(j);
            fields[0][k] = state.get(0, i, j);
            fields[1][k] = sign * v * state.get(1, i, j);
            fields[2][k] = state.get(2, i, j);
            fields[3][k] = v * state.get(3, i, j).sqrt();
            fields[4][k] = state.get(4, i, j);
        }
    }
    let [g_uu, g_uv, g_vv, phi, f] = fields;
    Ok(WarpedHalfPlaneMetric::new(
        (-((nu - 1) as f64) * h, h, full),
        (0.5 * h, h, nv),
        g_uu,
        g_uv,
        g_vv,
        phi,
        f,
    )?)
}

/// Arclength from `p` along the first row to the node before the last.
pub(crate) fn edge_arclength(metric: &WarpedHalfPlaneMetric) -> f64 {
    let (nu, _) = metric.shape();
    let (hu, _) = metric.spacing();
    let centre = metric.nearest_u(0.0);
    let root = |i: usize| metric.g_uu()[metric.idx(i, 0)].sqrt();
    (centre + 1..nu - 1).map(|i| 0.5 * hu * (root(i) + root(i - 1))).sum()
}

pub(crate) fn measure(metric: &WarpedHalfPlaneMetric) -> Result<Measured, WingError> {
    let subject = Subject::Grid { metric, fiber_dim: 1 };
    let s_edge = edge_arclength(metric);
    let (scalar_at_p, at_edge) = subject.scalar_along_gamma(&[s_edge])?;
    // geodesics between Γ(s) and Γ(−s) hug the axis row until s is well
    // past this domain; those to the bisector γ(s) leave it early
    let probe = GridProbe::with_triangle(metric, GRAPH_REACH, GridTriangle::Reflection);
    let s_max = s_edge.min(probe.max_scale());
    let cone = estimate_cone_angle(&probe, s_max, CONE_SAMPLES)?;
    Ok(Measured { scalar_at_p, s_edge, scalar_at_edge: at_edge[0], cone })
}
