//! Cross-checks of the first integral `G` against a brute-force Simpson
//! oracle that shares no code with the library's quadrature.

mod common;

use bpswall_core::{first_integral, first_integral_diff, FirstIntegralTable, ModelParams};
use proptest::prelude::*;

fn params(beta: f64) -> ModelParams {
    ModelParams::new(beta).unwrap()
}

#[test]
fn matches_brute_force_simpson_across_parameter_grid() {
    for &beta in &[0.0, 1.0, 2.0, 3.0, 3.9, 3.999] {
        let p = params(beta);
        for &u in &[-0.01, -0.5, -1.0, -2.0, -5.0, -10.0, -25.0] {
            let lib = first_integral(u, &p).unwrap();
            let brute = common::g_oracle(u, beta);
            assert!(
                (lib - brute).abs() <= 1e-10 * (1.0 + brute),
                "G({u}) at beta={beta}: library {lib}, simpson {brute}"
            );
        }
    }
}

#[test]
fn beta_zero_closed_form() {
    let p = params(0.0);
    for &u in &[-0.001, -0.1, -1.0, -3.0, -12.0, -30.0] {
        let lib = first_integral(u, &p).unwrap();
        let exact = 2.0 * (u.exp_m1() - u);
        assert!(
            (lib - exact).abs() <= 1e-13 * (1.0 + exact),
            "G({u}) at beta=0: library {lib}, closed form {exact}"
        );
    }
}

#[test]
fn value_lies_between_closed_form_bounds() {
    let lo = common::closed_lower(-1.0);
    let hi = lo * 2.0 / 2.0_f64.sqrt();
    let lib = first_integral(-1.0, &params(2.0)).unwrap();
    let brute = common::g_oracle(-1.0, 2.0);
    assert!(lo < lib && lib < hi, "G(-1) = {lib} outside ({lo}, {hi})");
    assert!(lo < brute && brute < hi);
}

#[test]
fn table_matches_direct_evaluation() {
    let p = params(2.0);
    let table = FirstIntegralTable::build(&p, -30.0, 0.01).unwrap();
    for &u in &[-0.005, -0.013, -0.777, -1.5, -7.31, -24.999, -29.5] {
        let direct = first_integral(u, &p).unwrap();
        let interp = table.eval(u).unwrap();
        assert!(
            (interp - direct).abs() <= 1e-9 * (1.0 + direct),
            "table at u={u}: interp {interp}, direct {direct}"
        );
    }
}

#[test]
fn difference_matches_separate_evaluations() {
    let p = params(3.0);
    for &(u, u_ref) in &[(-2.0, -1.0), (-9.0, -0.5), (-1.0001, -1.0)] {
        let diff = first_integral_diff(u, u_ref, &p).unwrap();
        let brute = common::g_oracle(u, 3.0) - common::g_oracle(u_ref, 3.0);
        assert!(
            (diff - brute).abs() <= 1e-10 * (1.0 + brute.abs()),
            "G({u}) - G({u_ref}): library {diff}, simpson {brute}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_increases_as_u_decreases(
        u in -20.0..-1e-3f64,
        gap in 1e-3..5.0f64,
        beta in 0.0..3.9f64,
    ) {
        let p = params(beta);
        let shallow = first_integral(u, &p).unwrap();
        let deep = first_integral(u - gap, &p).unwrap();
        prop_assert!(shallow > 0.0);
        prop_assert!(deep > shallow);
    }

    #[test]
    fn prop_bracketed_by_closed_forms(
        u in -20.0..-1e-3f64,
        beta in 0.0..3.9f64,
    ) {
        let p = params(beta);
        let g = first_integral(u, &p).unwrap();
        let lo = common::closed_lower(u);
        let hi = lo * 2.0 / (4.0 - beta).sqrt();
        let slack = 1e-12 * (1.0 + hi);
        prop_assert!(g >= lo - slack, "G({u}) = {g} below lower bound {lo} at beta={beta}");
        prop_assert!(g <= hi + slack, "G({u}) = {g} above upper bound {hi} at beta={beta}");
    }
}
