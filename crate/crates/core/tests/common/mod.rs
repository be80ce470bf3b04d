//! Brute-force oracles shared by the integration tests. Everything here is
//! deliberately independent of the library's own quadrature and integrator:
//! a plain composite Simpson rule on a fixed fine grid, and the beta = 0
//! closed forms, so that agreement is evidence rather than tautology.
#![allow(dead_code)]

/// Composite Simpson rule with `n` panels (`n` must be even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// The first-integral integrand `2(e^s - 1) / sqrt(1 - (beta/4)(e^s - 1)^2)`.
pub fn slope_integrand(s: f64, beta: f64) -> f64 {
    let w = s.exp_m1();
    2.0 * w / (1.0 - 0.25 * beta * w * w).sqrt()
}

/// `G(u)` by brute force: `int_0^u` of [`slope_integrand`] with 20000
/// Simpson panels, accurate to ~1e-12 over the ranges the tests use.
pub fn g_oracle(u: f64, beta: f64) -> f64 {
    simpson(|s| slope_integrand(s, beta), 0.0, u, 20000)
}

/// Exact critical slope for beta = 0: `sqrt(2(e^{-a} + a - 1))`.
pub fn critical_slope_beta_zero(a: f64) -> f64 {
    (2.0 * ((-a).exp() + a - 1.0)).sqrt()
}

/// Closed-form lower bound `2(e^u - u - 1)` on `G(u)`.
pub fn closed_lower(u: f64) -> f64 {
    2.0 * (u.exp() - u - 1.0)
}
