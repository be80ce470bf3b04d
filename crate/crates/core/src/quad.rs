//! Globally adaptive Gauss-Kronrod quadrature on the (7, 15) point pair.
//!
//! Each interval is estimated with the 15-point Kronrod rule; the embedded
//! 7-point Gauss value supplies the error estimate. The interval with the
//! largest estimated error is bisected until the error sum meets the
//! tolerance or the subdivision budget is exhausted.

use crate::error::{Result, SolverError};

/// Abscissae of the 15-point Kronrod rule on [-1, 1] (positive half).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Weights of the 15-point Kronrod rule, matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (nodes `XGK[1]`, `XGK[3]`,
/// `XGK[5]`, `XGK[7]`).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdiv: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_subdiv: 400,
        }
    }
}

/// One Kronrod panel: value, error estimate, and the roundoff reference
/// integrals of |f| and |f - mean|.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub value: f64,
    pub error: f64,
    pub resabs: f64,
    pub resasc: f64,
}

/// Evaluates the (7, 15) pair once on [a, b].
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let fc = f(centr);
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = resk.abs();

    for j in 0..7 {
        let absc = hlgth * XGK[j];
        fv1[j] = f(centr - absc);
        fv2[j] = f(centr + absc);
        let fsum = fv1[j] + fv2[j];
        resk += WGK[j] * fsum;
        resabs += WGK[j] * (fv1[j].abs() + fv2[j].abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }

    let value = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut error = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let uflow = f64::MIN_POSITIVE;
    let eps = f64::EPSILON;
    if resabs > uflow / (50.0 * eps) {
        error = error.max(50.0 * eps * resabs);
    }

    Panel {
        value,
        error,
        resabs,
        resasc,
    }
}

struct Interval {
    a: f64,
    b: f64,
    panel: Panel,
}

/// Integrates `f` over [a, b] adaptively. Succeeds when the summed error
/// estimate falls below `max(abs_tol, rel_tol * |I|)` or below the roundoff
/// floor of the integrand samples.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut intervals = vec![Interval {
        a,
        b,
        panel: gk15(&f, a, b),
    }];

    loop {
        let mut value = 0.0;
        let mut error = 0.0;
        let mut resabs = 0.0;
        for iv in &intervals {
            value += iv.panel.value;
            error += iv.panel.error;
            resabs += iv.panel.resabs;
        }
        if !value.is_finite() {
            return Err(SolverError::PrecisionError {
                requested: opts.abs_tol,
                achieved: f64::INFINITY,
            });
        }
        let floor = 50.0 * f64::EPSILON * resabs;
        let tol = opts.abs_tol.max(opts.rel_tol * value.abs()).max(floor);
        if error <= tol {
            return Ok(value);
        }
        if intervals.len() >= opts.max_subdiv {
            return Err(SolverError::PrecisionError {
                requested: tol,
                achieved: error,
            });
        }

        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.panel.error.total_cmp(&y.1.panel.error))
            .map(|(i, _)| i)
            .unwrap();
        let Interval { a: wa, b: wb, .. } = intervals.swap_remove(worst);
        let mid = 0.5 * (wa + wb);
        intervals.push(Interval {
            a: wa,
            b: mid,
            panel: gk15(&f, wa, mid),
        });
        intervals.push(Interval {
            a: mid,
            b: wb,
            panel: gk15(&f, mid, wb),
        });
    }
}
