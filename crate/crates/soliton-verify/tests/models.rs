use std::sync::OnceLock;

use geom_core::RadialProfile;
use models::{bryant_shoot, cigar_profile, product_with_line, rotational_to_warped, ShootingConfig};
use soliton_verify::*;

fn bryant() -> &'static RadialProfile {
    static B: OnceLock<RadialProfile> = OnceLock::new();
    B.get_or_init(|| {
        let cfg = ShootingConfig { r_max: 1000.0, step: 1e-2, ..ShootingConfig::new(3) };
        bryant_shoot(&cfg).unwrap().profile
    })
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a * (b / a).powf(k as f64 / (n - 1) as f64)).collect()
}

#[test]
fn bryant_identities() {
    let cfg = ShootingConfig { r_max: 100.0, step: 1e-2, ..ShootingConfig::new(3) };
    let p = bryant_shoot(&cfg).unwrap().profile;
    let r = soliton_residual(Fields::Profile(&p), 1e-6).unwrap();
    assert!(r.pass, "{r:?}");
    let h = hamilton_identity(Fields::Profile(&p), 1e-6).unwrap();
    assert!(h.pass, "{h:?}");
}

#[test]
fn cigar_hamilton_closed_form_and_redifferenced() {
    let c = cigar_profile(50.0, 1e-3).unwrap();
    assert!(hamilton_identity(Fields::Profile(&c), 1e-10).unwrap().pass);
    let d = c.redifferenced().unwrap();
    let h = hamilton_identity(Fields::Profile(&d), 1e-6).unwrap();
    assert!(h.pass, "{h:?}");
}

#[test]
fn bryant_edge_curvature_decays() {
    let e = edge_limit_check(&Subject::Rotational(bryant()), 0.0, 1000.0, 32, 0.05).unwrap();
    assert_eq!(e.trend, Trend::Nonincreasing);
    assert!(e.scalar_on_gamma.last().unwrap() < &(0.05 * e.scalar_at_p));
    assert!(e.report.pass);
}

#[test]
fn killing_identity_on_models() {
    let st: Vec<f64> = (1..=100).map(|k| 0.2 * k as f64).collect();
    let c = killing_identity(&Subject::LineTimesCigar, &st, 1e-8).unwrap();
    assert!(c.pass, "{c:?}");
    // lattice Bryant: the deviation is discretization error and shrinks
    // about fourfold when h halves
    let b = bryant();
    let dev = |h: f64| {
        let m = rotational_to_warped(b, 6.0, 6.0, h).unwrap();
        let st: Vec<f64> = (1..=8).map(|k| 0.5 * k as f64).collect();
        killing_identity(&Subject::Grid { metric: &m, fiber_dim: 1 }, &st, 1.0).unwrap().max_deviation
    };
    let (e1, e2) = (dev(0.1), dev(0.05));
    assert!(e1 < 1e-2 && e1 / e2 > 3.0, "{e1} {e2}");
}

#[test]
fn bryant_h_diagnostics() {
    let d = h_diagnostics(&Subject::Rotational(bryant()), &grid(10.0, 800.0, 12)).unwrap();
    assert!((d.h1_exponent - 0.5).abs() < 0.05, "{}", d.h1_exponent);
    assert!((d.h2_exponent - 0.5).abs() < 0.05, "{}", d.h2_exponent);
    assert!(d.dyadic_ratio(&d.h1sq_r()) < 1.2);
    assert!(d.h1h2_over_s().iter().all(|&x| x > 0.1));
    assert!(d.h2_concavity_violation() < 1e-9);
}

#[test]
fn product_h_diagnostics() {
    let d = h_diagnostics(&Subject::LineTimesCigar, &grid(1.0, 1000.0, 16)).unwrap();
    assert!((d.h1_exponent - 1.0).abs() < 1e-12);
    assert!(d.h2.iter().all(|&h| h <= 2.0));
    assert!(d.dyadic_ratio(&d.h1sq_r()) < 1.2);
}

#[test]
fn bryant_curvature_integral_grows_linearly() {
    let s = grid(10.0, 100.0, 10);
    let g = integral_r_growth(&Subject::Rotational(bryant()), &s).unwrap();
    assert!(g.min_ratio > 1.0 && g.slope > 1.0, "{g:?}");
    let fl = g.flux.unwrap();
    for k in 0..s.len() {
        assert!((g.integral[k] - fl[k]).abs() < 1e-4 * fl[k], "{} {}", g.integral[k], fl[k]);
    }
}

#[test]
fn bryant_volume_ratio() {
    let a = avr_estimate(&Subject::Rotational(bryant()), &[1.0, 10.0, 100.0, 1000.0]).unwrap();
    assert!(a.collapsing(0.1), "{a:?}");
    assert!(a.unit_ratio > 0.1);
}

#[test]
fn dimension_reduction_on_models() {
    let b = Subject::Rotational(bryant());
    let far = dimension_reduction_probe(&b, 500.0, Reference::LineTimesCigar, 0.2).unwrap();
    assert!(far.deviation > 0.1, "{far:?}");
    let round = dimension_reduction_probe(&b, 500.0, Reference::LineTimesSphere, 0.2).unwrap();
    assert!(round.deviation < far.deviation, "{round:?}");

    let c = cigar_profile(20.0, 0.05).unwrap();
    let m = product_with_line(&c, 20.0).unwrap();
    let lattice = Subject::Grid { metric: &m, fiber_dim: 1 };
    let p = dimension_reduction_probe(&lattice, 5.0, Reference::LineTimesCigar, 0.2).unwrap();
    assert!(p.deviation < 1e-2, "{p:?}");
}

#[test]
fn lattice_product_diagnostics() {
    let c = cigar_profile(20.0, 0.1).unwrap();
    let m = product_with_line(&c, 16.0).unwrap();
    let lattice = Subject::Grid { metric: &m, fiber_dim: 1 };
    let e = edge_limit_check(&lattice, std::f64::consts::PI, 15.0, 8, 1e-2).unwrap();
    assert!(e.report.pass, "{e:?}");
    let d = h_diagnostics(&lattice, &grid(0.5, 15.0, 10)).unwrap();
    for k in 0..10 {
        assert!((d.h1[k] - d.s[k]).abs() < 0.05 * d.s[k], "{} {}", d.h1[k], d.s[k]);
    }
    let g = integral_r_growth(&lattice, &[2.0, 4.0, 8.0]).unwrap();
    let exact = integral_r_growth(&Subject::LineTimesCigar, &[2.0, 4.0, 8.0]).unwrap();
    for k in 0..3 {
        assert!((g.integral[k] / exact.integral[k] - 1.0).abs() < 0.05, "{:?} {:?}", g.integral, exact.integral);
    }
}
