use std::f64::consts::PI;

use proptest::prelude::*;
use surface_flow::*;

fn initial(cells: usize) -> FlowState {
    FlowState::from_revolution(2.0, Mesh::graded(cells, 0.6), Some(PoleSmoothing::default()))
        .unwrap()
        .unit_min_curvature()
        .unwrap()
}

fn flow_to(mut s: FlowState, t_end: f64) -> FlowState {
    while s.time() < t_end {
        let dt = (0.5 * s.stability_bound()).min(t_end - s.time());
        s = s.ricci_flow_step(dt).unwrap();
    }
    s
}

#[test]
fn i2_run_satisfies_area_law_and_normalization() {
    let s0 = initial(256);
    let traj = run_flow(&s0, 1.05, &DtControl::default()).unwrap();
    assert_eq!(traj.stop, StopReason::Round);
    assert!(*traj.roundness.last().unwrap() <= 1.05);

    for (k, r) in traj.area_rates().iter().enumerate() {
        assert!((r / (-8.0 * PI) - 1.0).abs() < 0.01, "step {k}: {r}");
    }
    // maximum principle for K_t = ΔK + 2K²
    for w in traj.k_min.windows(2) {
        assert!(w[1] >= w[0] - 1e-9);
    }
    let t_est = s0.area() / (8.0 * PI);
    assert!((traj.extinction - t_est).abs() < 0.02 * t_est);

    let norm = normalization_factor(&traj).unwrap();
    let n = traj.len();
    assert_eq!(norm.values[0], 1.0);
    assert_eq!(norm.at(0.0), 1.0);
    let (v0, k0) = (traj.area[0], traj.k_min[0]);
    for k in 0..n {
        let vol = (v0 / traj.area[k]).sqrt();
        assert!(norm.values[k] <= vol * (1.0 + 1e-12));
        assert!(norm.values[k] <= (traj.k_min[k] / k0).sqrt() * (1.0 + 1e-12), "sample {k}");
        // rescaled metric r²g has curvature K/r²
        assert!(traj.k_min[k] / norm.values[k].powi(2) > 0.95);
    }
    for k in n - n / 10..n {
        assert!((norm.values[k] * (traj.area[k] / v0).sqrt() - 1.0).abs() < 1e-8);
    }
    assert!(norm.values.windows(2).all(|w| w[1] >= w[0]));
}

#[test]
fn round_sphere_radius_law_on_graded_mesh() {
    let rho0_sq: f64 = 2.0;
    let s = flow_to(FlowState::round(rho0_sq.sqrt(), Mesh::graded(64, 0.6)).unwrap(), 0.7);
    let expect = rho0_sq - 2.0 * s.time();
    let area_radius_sq = s.area() / (4.0 * PI);
    assert!((area_radius_sq - expect).abs() < 1e-6);
    assert!((s.roundness() - 1.0).abs() < 1e-12);
}

#[test]
fn kmin_converges_under_refinement() {
    let a = flow_to(initial(128), 0.1).k_min();
    let b = flow_to(initial(256), 0.1).k_min();
    assert!((a - b).abs() < 1e-3, "{a} {b}");
}

#[test]
fn equatorial_symmetry_is_preserved() {
    let s = flow_to(initial(128), 0.05);
    let w = s.conformal_factor();
    let n = w.len();
    for k in 0..n / 2 {
        assert!((w[k] / w[n - 1 - k] - 1.0).abs() < 1e-12, "{k}");
    }
}

#[test]
fn roundness_approaches_one_for_large_i() {
    // the equator has K = 1 for every i; the caps dominate K_max at small widths
    let r: Vec<f64> = [2.0, 8.0, 32.0]
        .iter()
        .map(|&i| FlowState::from_revolution(i, Mesh::graded(256, 0.6), Some(PoleSmoothing { width: 0.5 })).unwrap())
        .map(|s| s.roundness())
        .collect();
    assert!(r.iter().all(|&x| x >= 1.0));
    let raw: Vec<f64> = [2.0, 8.0, 32.0].iter().map(|&i| models::revolution_surface(i, 2048).unwrap().roundness()).collect();
    assert!(raw.windows(2).all(|w| w[1] < w[0]));
    assert!((raw[2] - 1.0).abs() < 2e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn area_law_and_gauss_bonnet(a in 0.0f64..0.9, c1 in -0.5f64..0.5, c2 in -0.3f64..0.3, cells in 16usize..80) {
        let mesh = Mesh::graded(cells, a);
        let w: Vec<f64> = mesh.centres().iter().map(|x| (c1 * x.cos().powi(2) + c2 * (2.0 * x).cos()).exp()).collect();
        let s = FlowState::new(mesh, 0.0, w).unwrap();
        prop_assert!((s.total_curvature() - 4.0 * PI).abs() < 1e-10);
        let dt = 0.5 * s.stability_bound();
        let next = s.ricci_flow_step(dt).unwrap();
        prop_assert!(((next.area() - s.area()) / dt + 8.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn scaling_divides_curvature(c in 0.1f64..10.0) {
        let s = initial(32);
        let t = s.scaled(c);
        for (a, b) in s.gauss_curvature().iter().zip(t.gauss_curvature()) {
            prop_assert!((a / c - b).abs() < 1e-12 * a.abs().max(1.0));
        }
    }
}
