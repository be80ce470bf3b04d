//! End-to-end shooting checks: the bisected critical slope against the
//! first-integral oracle and against an independent Simpson evaluation,
//! plus the ordering structure of the classification sets.

mod common;

use bpswall_core::{classify_grid, find_critical_slope, ModelParams, SlopeClassKind};
use proptest::prelude::*;

fn params(beta: f64) -> ModelParams {
    ModelParams::new(beta).unwrap()
}

#[test]
fn closed_form_critical_slope_at_beta_zero() {
    for &a in &[0.5, 1.0, 2.0] {
        let outcome = find_critical_slope(a, &params(0.0)).unwrap();
        let exact = common::critical_slope_beta_zero(a);
        let rel = (outcome.b_star - exact).abs() / exact;
        assert!(
            rel <= 1e-8,
            "a={a}: b_star {} vs closed form {exact} (rel {rel:.3e})",
            outcome.b_star
        );
    }
}

#[test]
fn agreement_with_independent_simpson_oracle() {
    for &beta in &[0.0, 1.0, 2.0, 3.0, 3.9] {
        let p = params(beta);
        for &a in &[0.5, 1.0, 2.0] {
            let outcome = find_critical_slope(a, &p).unwrap();
            assert!(
                outcome.agreement <= 1e-8,
                "beta={beta} a={a}: built-in agreement {:.3e}",
                outcome.agreement
            );
            let brute = common::g_oracle(-a, beta).sqrt();
            let rel = (outcome.b_star - brute).abs() / brute;
            assert!(
                rel <= 1e-8,
                "beta={beta} a={a}: b_star {} vs simpson {brute} (rel {rel:.3e})",
                outcome.b_star
            );
        }
    }
}

#[test]
fn classification_grid_is_ordered_without_inversions() {
    for &beta in &[0.0, 2.0] {
        let p = params(beta);
        let outcome = find_critical_slope(1.0, &p).unwrap();
        let n = 200;
        let bs: Vec<f64> = (0..n)
            .map(|i| 2.0 * outcome.b_star * i as f64 / (n - 1) as f64)
            .collect();
        let classes = classify_grid(1.0, &p, &bs).unwrap();
        let mut seen_plus = false;
        for (b, class) in bs.iter().zip(&classes) {
            match class.value {
                SlopeClassKind::BMinus => {
                    assert!(
                        !seen_plus,
                        "beta={beta}: undershoot at b={b} after an overshoot"
                    );
                    assert!(
                        *b < outcome.bracket.1,
                        "beta={beta}: undershoot at b={b} above the bracket"
                    );
                }
                SlopeClassKind::BPlus => {
                    seen_plus = true;
                    assert!(
                        *b > outcome.bracket.0,
                        "beta={beta}: overshoot at b={b} below the bracket"
                    );
                }
                SlopeClassKind::UndeterminedWithinHorizon => {
                    let (lo, hi) = outcome.bracket;
                    let width = 1e-6 * outcome.b_star;
                    assert!(
                        *b > lo - width && *b < hi + width,
                        "beta={beta}: undetermined slope b={b} far from the bracket ({lo}, {hi})"
                    );
                }
            }
        }
        assert!(seen_plus, "beta={beta}: no overshoot found below 2 b_star");
    }
}

#[test]
fn bisection_effort_is_bounded() {
    for &beta in &[0.0, 3.9] {
        let outcome = find_critical_slope(1.0, &params(beta)).unwrap();
        assert!(
            outcome.iterations < 200,
            "beta={beta}: {} classification calls",
            outcome.iterations
        );
        assert!(outcome.bracket.0 <= outcome.b_star && outcome.b_star <= outcome.bracket.1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_bisection_tracks_oracle(
        a in 0.2..3.0f64,
        beta in 0.0..3.9f64,
    ) {
        let outcome = find_critical_slope(a, &params(beta)).unwrap();
        prop_assert!(
            outcome.agreement <= 1e-7,
            "a={a} beta={beta}: agreement {:.3e}", outcome.agreement
        );
    }
}
