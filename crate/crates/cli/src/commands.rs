use std::f64::consts::PI;

use comparison_geom::{estimate_cone_angle, write_cone_csv, ConeAngleEstimate, Model, Warp};
use geom_core::{fd::trapezoid, write_grid_csv, write_profile_csv, RadialProfile, SolitonFields};
use models::{bryant_shoot, cigar_profile, ShootingConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use soliton_verify::{
    edge_limit_check, h_diagnostics, hamilton_identity, killing_identity, soliton_residual, write_edge_csv, Fields,
    IdentityReport, Subject, Trend,
};
use surface_flow::{
    normalization_factor, run_flow, write_trajectory_csv, DtControl, FlowState, Mesh, PoleSmoothing, StopReason,
};
use wing_solver::{newton_solve, wing_report, Discretization, WingProblem};

use crate::config::{Command, ModelKind, RunConfig};
use crate::emit::Results;
use crate::svg::line_plot;
use crate::CliError;

pub const GAMMA_HEADER: [&str; 2] = ["s", "R_Gamma"];
pub const HISTORY_HEADER: [&str; 3] = ["iteration", "residual", "damping"];
/// Spacing of the profiles behind `cone-angle` and `verify`.
const MODEL_STEP: f64 = 1e-2;

/// Run the configured experiment; nothing touches the file system.
pub fn run(cfg: &RunConfig) -> Result<Results, CliError> {
    let mut out = match cfg.command {
        Command::Cigar => cigar(cfg)?,
        Command::Bryant => bryant(cfg)?,
        Command::SurfaceFlow => surface_flow(cfg)?,
        Command::ConeAngle => cone_angle(cfg)?,
        Command::Verify => verify(cfg)?,
        Command::Wing => wing(cfg)?,
    };
    out.add("config.txt", cfg.render().into_bytes());
    Ok(out)
}

fn csv_rows<const N: usize>(header: [&str; N], rows: impl Iterator<Item = [String; N]>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(numerical)?;
    for r in rows {
        w.write_record(r).map_err(numerical)?;
    }
    w.into_inner().map_err(|e| CliError::Numerical(e.to_string()))
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

fn profile_bytes(p: &RadialProfile) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_profile_csv(p, &mut buf)?;
    Ok(buf)
}

fn gamma_bytes(s: &[f64], r: &[f64]) -> Result<Vec<u8>, CliError> {
    csv_rows(GAMMA_HEADER, s.iter().zip(r).map(|(s, r)| [format!("{s:e}"), format!("{r:e}")]))
}

fn concavity_gate(p: &RadialProfile, tol: f64) -> IdentityReport {
    let c = p.concavity();
    IdentityReport::new("concavity", c.max_violation, c.location, tol)
}

fn flag_gate(name: &str, ok: bool) -> IdentityReport {
    IdentityReport::new(name, if ok { 0.0 } else { 1.0 }, 0, 0.0)
}

fn cigar(cfg: &RunConfig) -> Result<Results, CliError> {
    let p = cigar_profile(cfg.real("r_max"), cfg.real("step"))?;
    let mut out = Results::default();
    let (k, _) = p.sectional_curvatures()?;
    let total = trapezoid(p.grid(), &k);
    out.reports.push(IdentityReport::new("curvature_integral", (total - 1.0).abs(), 0, 1e-10));
    out.reports.push(hamilton_identity(Fields::Profile(&p), 1e-10)?);
    let d = p.redifferenced()?;
    let mut h = hamilton_identity(Fields::Profile(&d), 1e-6)?;
    h.name = "hamilton_redifferenced".into();
    out.reports.push(h);
    out.reports.push(soliton_residual(Fields::Profile(&p), 1e-10)?);
    out.reports.push(concavity_gate(&p, 0.0));
    out.add("profile.csv", profile_bytes(&p)?);
    if cfg.flag("svg") {
        let r = p.scalar_curvature()?;
        let pts: Vec<(f64, f64)> = p.grid().iter().copied().zip(r).collect();
        out.add("curvature.svg", line_plot("cigar scalar curvature", "ρ", "R", &pts, false).into_bytes());
    }
    Ok(out)
}

fn bryant_profile(n: usize, r_max: f64, step: f64) -> Result<RadialProfile, CliError> {
    let sc = ShootingConfig { r_max, step, ..ShootingConfig::new(n) };
    Ok(bryant_shoot(&sc)?.profile)
}

fn bryant(cfg: &RunConfig) -> Result<Results, CliError> {
    let r_max = cfg.real("r_max");
    let p = bryant_profile(cfg.int("n"), r_max, cfg.real("step"))?;
    let mut out = Results::default();
    out.reports.push(soliton_residual(Fields::Profile(&p), 1e-6)?);
    out.reports.push(hamilton_identity(Fields::Profile(&p), 1e-6)?);
    // log-log slope of φ over the last quarter decade pair
    let (a, b) = (0.25 * r_max, r_max);
    let slope = (p.warp_at(b) / p.warp_at(a)).ln() / (b / a).ln();
    out.reports.push(IdentityReport::new("growth_exponent", (slope - 0.5).abs(), 0, 0.05));
    out.reports.push(concavity_gate(&p, 1e-12));
    out.add("profile.csv", profile_bytes(&p)?);
    if cfg.flag("svg") {
        let r = p.scalar_curvature()?;
        let pts: Vec<(f64, f64)> = p.grid().iter().copied().zip(r).collect();
        out.add("curvature.svg", line_plot("Bryant scalar curvature", "r", "R", &pts, true).into_bytes());
    }
    Ok(out)
}

fn surface_flow(cfg: &RunConfig) -> Result<Results, CliError> {
    let mesh = Mesh::graded(cfg.int("cells"), cfg.real("grading"));
    let s0 = FlowState::from_revolution(cfg.real("i"), mesh, Some(PoleSmoothing { width: cfg.real("smoothing") }))?
        .unit_min_curvature()?;
    let stop = cfg.real("stop_roundness");
    let traj = run_flow(&s0, stop, &DtControl::default())?;
    let norm = normalization_factor(&traj)?;
    let mut out = Results::default();

    let rates = traj.area_rates();
    out.reports.push(IdentityReport::from_deviations(
        "area_law",
        rates.iter().map(|r| r / (-8.0 * PI) - 1.0),
        0.01,
    ));
    let n = traj.len();
    let last = *traj.roundness.last().expect("nonempty");
    out.reports.push(IdentityReport {
        pass: traj.stop == StopReason::Round && last <= stop,
        ..IdentityReport::new("roundness", last, n - 1, stop)
    });
    out.reports.push(IdentityReport::new("r_i_initial", (norm.values[0] - 1.0).abs(), 0, 1e-12));
    let v0 = traj.area[0];
    let tail = n - n / 10;
    let branch = (tail..n).map(|k| norm.values[k] * (traj.area[k] / v0).sqrt() - 1.0);
    let mut vb = IdentityReport::from_deviations("volume_branch", branch, 1e-8);
    vb.location += tail;
    out.reports.push(vb);

    let mut buf = Vec::new();
    write_trajectory_csv(&mut buf, &traj, &norm.values)?;
    out.add("trajectory.csv", buf);
    if cfg.flag("svg") {
        let pts: Vec<(f64, f64)> = traj.times.iter().copied().zip(traj.roundness.iter().copied()).collect();
        out.add("roundness.svg", line_plot("K_max / K_min under the flow", "t", "roundness", &pts, false).into_bytes());
    }
    Ok(out)
}

fn cone_plot(est: &ConeAngleEstimate) -> String {
    let pts: Vec<(f64, f64)> = est.scales.iter().zip(&est.angles).map(|(s, a)| (1.0 / s, *a)).collect();
    line_plot("comparison angle against 1/s", "1/s", "θ", &pts, false)
}

fn cone_angle(cfg: &RunConfig) -> Result<Results, CliError> {
    let s_max = cfg.real("s_max");
    let samples = cfg.int("samples");
    let kind = cfg.model();
    let profile;
    let (model, expected, tol) = match kind {
        ModelKind::LineCigar => (Model::LineTimes(Warp::Cigar), PI, 1e-6),
        ModelKind::Cigar => (Model::Rotational(Warp::Cigar), 0.0, 0.1),
        ModelKind::Bryant => {
            profile = bryant_profile(3, s_max, MODEL_STEP)?;
            (Model::Rotational(Warp::Sampled(&profile)), 0.0, 0.1)
        }
    };
    let est = estimate_cone_angle(&model, s_max, samples)?;
    let mut out = Results::default();
    out.reports.push(IdentityReport::new("cone_angle", (est.alpha - expected).abs(), samples - 1, tol));
    out.reports.push(flag_gate("cone_monotone", est.monotone));
    let mut buf = Vec::new();
    write_cone_csv(&mut buf, &est)?;
    out.add("cone.csv", buf);
    if cfg.flag("svg") {
        out.add("cone.svg", cone_plot(&est).into_bytes());
    }
    Ok(out)
}

/// `count` sorted stations drawn uniformly from `(lo, hi)`.
fn random_stations(seed: u64, count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s: Vec<f64> = (0..count).map(|_| rng.gen_range(lo..hi)).collect();
    s.sort_by(f64::total_cmp);
    s
}

fn geometric(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn verify(cfg: &RunConfig) -> Result<Results, CliError> {
    let s_max = cfg.real("s_max");
    let stations = random_stations(cfg.seed, cfg.int("stations"), 0.0, 0.5 * s_max);
    let kind = cfg.model();
    let mut out = Results::default();
    let profile = match kind {
        ModelKind::LineCigar | ModelKind::Cigar => cigar_profile(s_max, MODEL_STEP)?,
        ModelKind::Bryant => bryant_profile(3, s_max, MODEL_STEP)?,
    };
    let (subject, alpha, edge_tol, killing_tol, field_tol) = match kind {
        ModelKind::LineCigar => (Subject::LineTimesCigar, PI, 1e-12, Some(1e-8), 1e-10),
        ModelKind::Cigar => (Subject::Rotational(&profile), 0.0, 1e-12, None, 1e-10),
        ModelKind::Bryant => (Subject::Rotational(&profile), 0.0, 0.05, Some(1e-6), 1e-6),
    };
    out.reports.push(soliton_residual(Fields::Profile(&profile), field_tol)?);
    out.reports.push(hamilton_identity(Fields::Profile(&profile), field_tol)?);
    let edge = edge_limit_check(&subject, alpha, s_max, 32, edge_tol)?;
    out.reports.push(edge.report.clone());
    let trend_ok = matches!(edge.trend, Trend::Constant | Trend::Nonincreasing);
    out.reports.push(flag_gate("edge_trend", trend_ok));
    // a surface has no rotation about Γ
    if let Some(tol) = killing_tol {
        out.reports.push(killing_identity(&subject, &stations, tol)?);
    }

    let diag = h_diagnostics(&subject, &geometric(s_max / 1000.0, 0.8 * s_max, 16))?;
    let mut buf = Vec::new();
    write_edge_csv(&mut buf, &diag)?;
    out.add("edge.csv", buf);
    let (s, r) = (&edge.s, &edge.scalar_on_gamma);
    let mut s_all = vec![0.0];
    s_all.extend_from_slice(s);
    let mut r_all = vec![edge.scalar_at_p];
    r_all.extend_from_slice(r);
    out.add("gamma.csv", gamma_bytes(&s_all, &r_all)?);
    if cfg.flag("svg") {
        let pts: Vec<(f64, f64)> = s_all.iter().copied().zip(r_all.iter().copied()).collect();
        out.add("gamma.svg", line_plot("scalar curvature along Γ", "s", "R(Γ(s))", &pts, false).into_bytes());
    }
    Ok(out)
}

fn wing(cfg: &RunConfig) -> Result<Results, CliError> {
    let problem = WingProblem {
        half_length: cfg.real("half_length"),
        nodes_u: cfg.int("nodes_u"),
        nodes_v: cfg.int("nodes_v"),
        bend_scale: cfg.real("bend_scale"),
        tol: cfg.real("tol"),
        max_iter: cfg.int("max_iter"),
        ..WingProblem::new(cfg.real("alpha0"))
    };
    let sol = newton_solve(&problem)?;
    let rep = wing_report(&sol)?;
    let mut out = Results::default();

    out.reports.push(IdentityReport::new("newton_residual", sol.final_residual(), sol.iterations(), problem.tol));
    // Jacobian against central differences in one seeded direction
    let disc = Discretization::new(&problem)?;
    let sys = disc.assemble(&sol.state)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let dir: Vec<f64> = (0..sol.state.data.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let fd = disc.jacobian_fd_error(&sol.state, &sys.jacobian, &dir, 1e-6)?;
    out.reports.push(IdentityReport::new("jacobian_fd", fd, 0, 1e-6));
    out.reports.extend(rep.gates());

    let mut summary = Vec::new();
    rep.write_summary(&mut summary).map_err(numerical)?;
    out.add("summary.json", summary);
    let damping = std::iter::once(0.0).chain(sol.damping.iter().copied());
    let history = sol.history.iter().zip(damping).enumerate();
    out.add(
        "history.csv",
        csv_rows(HISTORY_HEADER, history.map(|(k, (r, d))| [k.to_string(), format!("{r:e}"), format!("{d}")]))?,
    );
    let mut grid = Vec::new();
    write_grid_csv(&sol.metric, &mut grid)?;
    out.add("grid.csv", grid);
    let mut cone = Vec::new();
    write_cone_csv(&mut cone, &sol.measured.cone)?;
    out.add("cone.csv", cone);
    let mut edge = Vec::new();
    write_edge_csv(&mut edge, &rep.edge)?;
    out.add("edge.csv", edge);

    let subject = Subject::Grid { metric: &sol.metric, fiber_dim: 1 };
    let s: Vec<f64> = (0..=32).map(|k| sol.measured.s_edge * k as f64 / 32.0).collect();
    let (_, r) = subject.scalar_along_gamma(&s)?;
    out.add("gamma.csv", gamma_bytes(&s, &r)?);
    if cfg.flag("svg") {
        let pts: Vec<(f64, f64)> = s.iter().copied().zip(r).collect();
        out.add("gamma.svg", line_plot("scalar curvature along Γ", "s", "R(Γ(s))", &pts, false).into_bytes());
        out.add("cone.svg", cone_plot(&sol.measured.cone).into_bytes());
        let pts: Vec<(f64, f64)> = sol.history.iter().enumerate().map(|(k, r)| (k as f64, *r)).collect();
        out.add("residual.svg", line_plot("Newton residual", "iteration", "max |F|", &pts, true).into_bytes());
    }
    Ok(out)
}
