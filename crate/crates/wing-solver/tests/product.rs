use std::f64::consts::PI;

use wing_solver::{max_norm, newton_solve, Discretization, WingError, WingProblem};

fn interior_residual(nodes_u: usize, nodes_v: usize) -> f64 {
    let p = WingProblem { half_length: 4.0, nodes_u, nodes_v, ..WingProblem::new(PI) };
    let disc = Discretization::new(&p).unwrap();
    max_norm(&disc.equations(disc.background()).unwrap())
}

#[test]
fn straight_product_is_a_discrete_solution_to_second_order() {
    // the exact ℝ × cigar solves the gauged system with W = 0
    let (coarse, fine) = (interior_residual(65, 33), interior_residual(129, 65));
    assert!(coarse < 5e-3, "{coarse:e}");
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn newton_converges_quadratically_near_the_product() {
    let p = WingProblem { half_length: 4.0, nodes_u: 65, nodes_v: 33, ..WingProblem::new(3.0) };
    let sol = newton_solve(&p).unwrap();
    assert!(sol.iterations() <= 12, "{:?}", sol.history);
    assert!(sol.final_residual() < p.tol);
    // quadratic tail: the last full step squares the error up to a constant
    let h = &sol.history;
    let (a, b, c) = (h[h.len() - 3], h[h.len() - 2], h[h.len() - 1]);
    assert!(c < 1e-2 * b && b < 0.1 * a, "{h:?}");
    assert_eq!(*sol.damping.last().unwrap(), 1.0);
}

#[test]
fn invalid_problems_are_rejected() {
    let bad = WingProblem { nodes_u: 64, ..WingProblem::new(2.5) };
    assert!(matches!(newton_solve(&bad), Err(WingError::OutOfRange { name: "nodes_u", .. })));
    let bad = WingProblem::new(f64::NAN);
    assert!(matches!(newton_solve(&bad), Err(WingError::OutOfRange { name: "alpha0", .. })));
}
