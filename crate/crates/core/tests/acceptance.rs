//! One test per acceptance criterion. Each prints a PASS/FAIL line with the
//! measured values, then asserts. Run with `--nocapture` to see the lines.

use hypertree::verify::{self, CriterionOutcome};
use hypertree::Execution;

fn check(outcome: CriterionOutcome) {
    println!("{}", outcome.line());
    for (k, v) in &outcome.measured {
        println!("    {k}: {v}");
    }
    assert!(outcome.passed, "{}", outcome.line());
}

fn exec() -> Execution {
    Execution::default()
}

#[test]
fn exact_moments_small() {
    check(verify::exact_moments_small(exec()));
}

#[test]
fn exact_moments_oracle() {
    check(verify::exact_moments_oracle(exec()));
}

#[test]
fn tree_counts() {
    check(verify::tree_counts(exec()));
}

#[test]
fn table1_reproduction() {
    check(verify::table1_reproduction(exec()));
}

// Expected to fail: the printed column for s holds (up to one last-digit
// slip) the values at s + 1, see `asymptotics::table2_is_shifted_by_one`.
#[test]
fn table2_reproduction() {
    check(verify::table2_reproduction(exec()));
}

#[test]
fn expansion_check() {
    check(verify::expansion_check(exec()));
}

#[test]
fn xi_identity() {
    check(verify::xi_identity(exec()));
}

#[test]
fn variance_identity() {
    check(verify::variance_identity(exec()));
}

#[test]
fn laplace_checks() {
    check(verify::laplace_checks(exec()));
}

#[test]
fn second_moment_trend() {
    check(verify::second_moment_trend(exec()));
}

#[test]
fn poisson_limits() {
    check(verify::poisson_limits(exec()));
}

#[test]
fn w_sampler() {
    check(verify::w_sampler(exec()));
}

#[test]
fn sampler_uniformity() {
    check(verify::sampler_uniformity(exec()));
}

#[test]
fn tolerances_are_pinned() {
    assert_eq!(verify::TABLE1_DECIMALS, 3);
    assert_eq!(verify::TABLE2_SIG_FIGS, 2);
    assert_eq!(verify::EXPANSION_GAP_S12, 0.05);
    assert_eq!(verify::XI_J_MAX, 20);
    assert_eq!(verify::VARIANCE_TOL, 1e-10);
    assert_eq!(verify::GRAD_TOL, 1e-10);
    assert_eq!(verify::ARGMAX_TOL, 1e-6);
    assert_eq!(verify::DET_REL_TOL, 1e-4);
    assert_eq!(verify::MC_SE_FACTOR, 3.0);
    assert_eq!(verify::POISSON_TRIALS, 10_000);
    assert_eq!(verify::W_SAMPLES, 1_000_000);
    assert_eq!(verify::UNIFORMITY_SAMPLES, 100_000);
    assert_eq!(verify::UNIFORMITY_P_MIN, 1e-3);
    assert_eq!(verify::ORACLE_RUNTIME_SMALL.as_secs(), 1);
    assert_eq!(verify::ORACLE_RUNTIME.as_secs(), 60);
    assert_eq!(verify::TABLE_RUNTIME.as_secs(), 1);
    assert_eq!(verify::XI_RUNTIME.as_secs(), 10);
    assert_eq!(verify::MC_RUNTIME.as_secs(), 300);
}
