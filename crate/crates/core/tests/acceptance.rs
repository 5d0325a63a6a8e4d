//! Acceptance suite: one test per criterion, each printing its pass/fail
//! line (visible with --nocapture or on failure).

use softedge::acceptance::run_criterion;

fn check(id: usize) {
    let c = run_criterion(id).expect("criterion runner failed");
    println!("{}", c.line());
    assert!(c.passed, "{}", c.line());
}

#[test]
fn acceptance_01_tracy_widom_cross_method() {
    check(1);
}

#[test]
fn acceptance_02_triple_derivative_identity() {
    check(2);
}

#[test]
fn acceptance_03_janossy_gap_equivalence() {
    check(3);
}

#[test]
fn acceptance_04_finite_n_kernel_identity() {
    check(4);
}

#[test]
fn acceptance_05_universality_rate() {
    check(5);
}

#[test]
fn acceptance_06_airy_side_asymptotics() {
    check(6);
}

#[test]
fn acceptance_07_bessel_side_trend() {
    check(7);
}

#[test]
fn acceptance_08_continuity_across_zero() {
    check(8);
}

#[test]
fn acceptance_09_parametrix_suite() {
    check(9);
}

#[test]
fn acceptance_10_monte_carlo_edge_laws() {
    check(10);
}

#[test]
fn acceptance_11_equilibrium_measures() {
    check(11);
}
