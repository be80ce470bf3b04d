//! Whole-profile checks across the admissible parameter range: shape,
//! conservation, bounds, tails, symmetry, and agreement between the two
//! independent constructions (shooting IVP vs first-integral quadrature).

mod common;

use bpswall_core::profile::{DEFAULT_HALF_WINDOW, DEFAULT_WINDOW};
use bpswall_core::{
    check_brackets, first_integral_residual, fit_tails, profile_by_quadrature,
    solve_higgs_to_magnetic, solve_magnetic_to_magnetic, BoundaryCondition, ModelParams,
    WallProfile,
};
use proptest::prelude::*;

const BETAS: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 3.9];

fn params(beta: f64) -> ModelParams {
    ModelParams::new(beta).unwrap()
}

fn wall(beta: f64, a: f64) -> WallProfile {
    solve_higgs_to_magnetic(a, &params(beta), DEFAULT_WINDOW).unwrap()
}

fn symmetric_wall(beta: f64, u0: f64) -> WallProfile {
    solve_magnetic_to_magnetic(u0, &params(beta), DEFAULT_HALF_WINDOW).unwrap()
}

#[test]
fn higgs_to_magnetic_is_strictly_decreasing_and_negative() {
    for beta in BETAS {
        let prof = wall(beta, 1.0);
        for i in 0..prof.len() {
            assert!(
                prof.u[i] < 0.0,
                "beta={beta}: u = {} at node {i}",
                prof.u[i]
            );
            assert!(
                prof.du[i] < 0.0,
                "beta={beta}: du = {} at node {i}",
                prof.du[i]
            );
        }
    }
}

#[test]
fn first_integral_conserved_along_profiles() {
    for beta in BETAS {
        let prof = wall(beta, 1.0);
        let (res, at) = first_integral_residual(&prof).unwrap();
        assert!(
            res <= 1e-9,
            "beta={beta} wall: normalized residual {res:.3e} at node {at}"
        );
    }
    for &(beta, u0) in &[(0.0, -1.0), (2.0, -1.0), (2.0, -2.5), (3.0, -0.5)] {
        let prof = symmetric_wall(beta, u0);
        let (res, at) = first_integral_residual(&prof).unwrap();
        assert!(
            res <= 1e-9,
            "beta={beta} u0={u0}: normalized residual {res:.3e} at node {at}"
        );
    }
}

#[test]
fn ivp_and_quadrature_constructions_agree() {
    for &beta in &[0.0, 2.0] {
        let p = params(beta);

        let prof = wall(beta, 1.0);
        let c = prof.center_index();
        let idx: Vec<usize> = (c..prof.len()).step_by(40).collect();
        let us: Vec<f64> = idx.iter().map(|&i| prof.u[i]).collect();
        let pts = profile_by_quadrature(-1.0, &p, BoundaryCondition::HiggsToMagnetic, &us).unwrap();
        for (&i, &(x, _)) in idx.iter().zip(&pts) {
            let diff = (prof.grid[i] - x).abs();
            assert!(
                diff <= 1e-6,
                "beta={beta} wall at u={}: ivp x={}, quadrature x={x} (diff {diff:.3e})",
                prof.u[i],
                prof.grid[i]
            );
        }

        let sym = symmetric_wall(beta, -1.0);
        let sc = sym.center_index();
        let idx: Vec<usize> = (sc + 1..sym.len()).step_by(40).collect();
        let us: Vec<f64> = idx.iter().map(|&i| sym.u[i]).collect();
        let pts =
            profile_by_quadrature(-1.0, &p, BoundaryCondition::MagneticToMagnetic, &us).unwrap();
        for (&i, &(x, _)) in idx.iter().zip(&pts) {
            let diff = (sym.grid[i] - x).abs();
            assert!(
                diff <= 1e-6,
                "beta={beta} symmetric at u={}: ivp x={}, quadrature x={x} (diff {diff:.3e})",
                sym.u[i],
                sym.grid[i]
            );
        }
    }
}

#[test]
fn slope_bounds_hold_pointwise() {
    for &beta in &[1.0, 2.0, 3.0] {
        let rep = check_brackets(&wall(beta, 1.0)).unwrap();
        assert_eq!(
            rep.violations, 0,
            "beta={beta}: {} violations",
            rep.violations
        );
        assert!(
            rep.min_lower_margin > -1e-10,
            "beta={beta}: lower margin {}",
            rep.min_lower_margin
        );
        assert!(
            rep.min_upper_margin > -1e-10,
            "beta={beta}: upper margin {}",
            rep.min_upper_margin
        );
    }
    let rep = check_brackets(&wall(0.0, 1.0)).unwrap();
    let gap = rep.coincidence_gap.unwrap();
    assert!(gap <= 1e-9, "beta=0: bound/derivative gap {gap:.3e}");
}

#[test]
fn tail_rates_match_the_model() {
    for beta in BETAS {
        let fit = fit_tails(&wall(beta, 1.0)).unwrap();
        let lambda = fit.lambda_left.unwrap();
        assert!(
            (lambda - 1.0).abs() <= 0.05,
            "beta={beta}: left decay rate {lambda}"
        );
        let predicted = 2.0 / (4.0 - beta).sqrt();
        assert!(
            (fit.c_right - predicted).abs() <= 1e-3,
            "beta={beta}: right curvature {} vs predicted {predicted}",
            fit.c_right
        );
        assert!(
            (fit.c_right - fit.c_right_model).abs() <= 1e-3,
            "beta={beta}: finite-difference {} vs model {}",
            fit.c_right,
            fit.c_right_model
        );
        if beta == 0.0 {
            assert!((fit.c_right - 1.0).abs() <= 1e-3);
        } else {
            assert!(
                (fit.c_right - 1.0).abs() > 1e-3,
                "beta={beta}: right curvature should exceed the beta=0 value"
            );
        }
    }
}

#[test]
fn symmetric_profiles_are_even_with_flat_center() {
    for &(beta, u0) in &[(0.0, -1.0), (2.0, -1.0), (2.0, -2.5)] {
        let prof = symmetric_wall(beta, u0);
        let n = prof.len();
        let c = prof.center_index();
        assert_eq!(prof.grid[c], 0.0);
        let mirror = (0..n)
            .map(|i| (prof.u[i] - prof.u[n - 1 - i]).abs())
            .fold(0.0f64, f64::max);
        assert!(
            mirror <= 1e-8,
            "beta={beta} u0={u0}: mirror residual {mirror:.3e}"
        );
        let max_at = (0..n)
            .max_by(|&i, &j| prof.u[i].total_cmp(&prof.u[j]))
            .unwrap();
        assert_eq!(max_at, c, "beta={beta} u0={u0}: maximum away from center");
        assert!(
            prof.du[c].abs() <= 1e-10,
            "beta={beta} u0={u0}: center slope {}",
            prof.du[c]
        );
    }
}

#[test]
fn quadrature_construction_rejects_bad_samples() {
    let p = params(1.0);
    assert!(
        profile_by_quadrature(-1.0, &p, BoundaryCondition::HiggsToMagnetic, &[-1.0, -0.5]).is_err(),
        "non-decreasing samples must be rejected"
    );
    assert!(profile_by_quadrature(0.5, &p, BoundaryCondition::HiggsToMagnetic, &[-1.0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn prop_wall_conserves_first_integral(
        a in 0.3..2.5f64,
        beta in 0.0..3.5f64,
    ) {
        let prof = solve_higgs_to_magnetic(a, &params(beta), DEFAULT_WINDOW).unwrap();
        let (res, _) = first_integral_residual(&prof).unwrap();
        prop_assert!(res <= 1e-8, "a={a} beta={beta}: residual {res:.3e}");
        prop_assert!(prof.du.iter().all(|&d| d < 0.0));
    }

    #[test]
    fn prop_symmetric_wall_conserves_first_integral(
        u0 in -4.0..-0.2f64,
        beta in 0.0..3.5f64,
    ) {
        let prof = solve_magnetic_to_magnetic(u0, &params(beta), DEFAULT_HALF_WINDOW).unwrap();
        let (res, _) = first_integral_residual(&prof).unwrap();
        prop_assert!(res <= 1e-8, "u0={u0} beta={beta}: residual {res:.3e}");
        let c = prof.center_index();
        prop_assert!(prof.du[c].abs() <= 1e-10);
    }
}
