//! Finite-difference derivatives on uniformly spaced samples.

/// First derivative, fourth order: five-point centered stencils in the
/// interior, one-sided five-point stencils of matching order at the edges.
pub fn d1(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "need at least 5 samples for the 5-point stencil");
    assert!(h > 0.0);
    let f = values;
    let d = 12.0 * h;
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / d;
    }
    out[n - 2] =
        (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d;
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4]
        + 3.0 * f[n - 5])
        / d;
    out
}

/// Second derivative, second order: three-point centered stencils in the
/// interior, one-sided four-point stencils at the edges.
pub fn d2(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 4, "need at least 4 samples for the one-sided stencil");
    assert!(h > 0.0);
    let f = values;
    let h2 = h * h;
    let mut out = vec![0.0; n];
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for i in 1..n - 1 {
        out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    }
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    out
}
