use wing_solver::{newton_solve, to_metric, wing_report, WingProblem};

fn reduced(nodes_u: usize, nodes_v: usize) -> WingProblem {
    WingProblem { half_length: 8.0, nodes_u, nodes_v, ..WingProblem::new(2.5) }
}

#[test]
fn reduced_wing_converges_and_reports() {
    let sol = newton_solve(&reduced(129, 65)).unwrap();
    assert!(sol.final_residual() < 1e-8);
    assert!(sol.iterations() <= 20);
    // Z₂ symmetry of the mirrored metric
    let m = &sol.metric;
    let (nu, nv) = m.shape();
    for j in [0, 10, nv - 1] {
        let (a, b) = (m.idx(3, j), m.idx(nu - 4, j));
        assert_eq!(m.g_uu()[a], m.g_uu()[b]);
        assert_eq!(m.g_uv()[a], -m.g_uv()[b]);
    }
    let r = wing_report(&sol).unwrap();
    assert!(r.axis_defect < 1e-2, "{}", r.axis_defect);
    assert!(r.alpha_est > 2.5 && r.alpha_est < std::f64::consts::PI, "{}", r.alpha_est);
    assert!(r.probes_decrease());
    assert!(r.h1h2_floor() > 0.0);
    let mut out = Vec::new();
    r.write_summary(&mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert!(text.starts_with("{\n") && text.contains("\"hamilton_spread\""));
    assert!(to_metric(&sol.problem, &sol.state).unwrap() == sol.metric);
}

#[test]
fn tip_curvature_is_mesh_independent() {
    let coarse = newton_solve(&reduced(129, 65)).unwrap();
    let fine = newton_solve(&reduced(257, 129)).unwrap();
    let (a, b) = (coarse.measured.scalar_at_p, fine.measured.scalar_at_p);
    assert!(((a - b) / b).abs() < 0.02, "{a} vs {b}");
}
