//! Adaptive initial-value integration of the wall equation as the
//! first-order system `u' = q`, `q' = rhs(u)`, using the embedded
//! Dormand-Prince 5(4) pair with FSAL, a fifth-order dense interpolant, and
//! event detection by sign-change bracketing plus bisection polishing.
//!
//! Internally the integrator always advances an increasing arc length `s`;
//! a `Backward` spec maps `x = x0 - s` and negates the emitted derivative,
//! so the same stepping code serves both directions.

use crate::error::{Result, SolverError};
use crate::model::{self, ModelParams, State};
use crate::numdiff;

/// Sign of `dx` along the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Which events terminate the integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct EventSet {
    /// `u'` (in the integration direction) turns negative.
    pub derivative_turned_negative: bool,
    /// `u` crosses 0 from below while still rising.
    pub crossed_zero_upward: bool,
    /// `u` drops below the floor.
    pub hit_floor: bool,
}

impl EventSet {
    /// No events: run to the horizon.
    pub fn none() -> Self {
        Self::default()
    }

    /// The two qualitative events used by slope classification.
    pub fn shooting() -> Self {
        Self {
            derivative_turned_negative: true,
            crossed_zero_upward: true,
            hit_floor: false,
        }
    }

    /// Only the floor stop, used by profile assembly.
    pub fn floor_only() -> Self {
        Self {
            derivative_turned_negative: false,
            crossed_zero_upward: false,
            hit_floor: true,
        }
    }
}

/// Terminal event kinds; `HorizonReached` is the no-event outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    DerivativeTurnedNegative,
    CrossedZeroUpward,
    HitFloor,
    HorizonReached,
    DomainError,
}

/// A located terminal event with its root-polished position.
#[derive(Debug, Clone, Copy)]
pub struct EventRecord {
    pub kind: EventKind,
    pub x_event: f64,
    pub state_at_event: State,
}

/// Step-size bookkeeping for one integration.
#[derive(Debug, Clone, Copy)]
pub struct StepStats {
    pub accepted: u64,
    pub rejected: u64,
    pub min_step: f64,
    pub max_step: f64,
    pub rhs_evals: u64,
}

impl Default for StepStats {
    fn default() -> Self {
        Self {
            accepted: 0,
            rejected: 0,
            min_step: f64::INFINITY,
            max_step: 0.0,
            rhs_evals: 0,
        }
    }
}

impl StepStats {
    /// Combines counters from two integration legs.
    pub fn merged(&self, other: &StepStats) -> StepStats {
        StepStats {
            accepted: self.accepted + other.accepted,
            rejected: self.rejected + other.rejected,
            min_step: self.min_step.min(other.min_step),
            max_step: self.max_step.max(other.max_step),
            rhs_evals: self.rhs_evals + other.rhs_evals,
        }
    }
}

/// One initial-value problem.
#[derive(Debug, Clone, Copy)]
pub struct IvpSpec {
    pub params: ModelParams,
    pub initial: State,
    pub direction: Direction,
    /// Maximum `|x - x0|` to advance.
    pub horizon: f64,
    /// Stop when `u` drops below this value (must lie below `initial.u`).
    pub u_floor: f64,
    pub events: EventSet,
}

/// Dense-output coefficients of one accepted step, per component.
#[derive(Debug, Clone, Copy)]
struct Segment {
    s0: f64,
    h: f64,
    c: [[f64; 5]; 2],
}

impl Segment {
    fn eval(&self, s: f64) -> [f64; 2] {
        let theta = ((s - self.s0) / self.h).clamp(0.0, 1.0);
        let omt = 1.0 - theta;
        let mut y = [0.0; 2];
        for (i, c) in self.c.iter().enumerate() {
            y[i] = c[0] + theta * (c[1] + omt * (c[2] + theta * (c[3] + omt * c[4])));
        }
        y
    }
}

/// An integration result: accepted samples, the terminating event, and the
/// dense interpolant for resampling between them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<State>,
    pub terminal_event: EventKind,
    pub event: Option<EventRecord>,
    pub step_stats: StepStats,
    x0: f64,
    sigma: f64,
    s_end: f64,
    segments: Vec<Segment>,
}

impl Trajectory {
    /// Starting position.
    pub fn x_start(&self) -> f64 {
        self.x0
    }

    /// Final position (event location or horizon end).
    pub fn x_end(&self) -> f64 {
        self.x0 + self.sigma * self.s_end
    }

    pub fn final_state(&self) -> State {
        *self.samples.last().unwrap()
    }

    /// Dense-output state at position `x`, which must lie within the span
    /// (a slack of 1e-9 absorbs grid roundoff at the ends).
    pub fn state_at(&self, x: f64) -> Option<State> {
        let s = self.sigma * (x - self.x0);
        if s < -1e-9 || s > self.s_end + 1e-9 {
            return None;
        }
        let s = s.clamp(0.0, self.s_end);
        let idx = self
            .segments
            .partition_point(|seg| seg.s0 + seg.h < s)
            .min(self.segments.len().saturating_sub(1));
        let seg = self.segments.get(idx)?;
        let y = seg.eval(s);
        Some(State {
            x: self.x0 + self.sigma * s,
            u: y[0],
            du: self.sigma * y[1],
        })
    }
}

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
/// Weights of the fifth-order dense-output correction term.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Width to which event roots are polished, in the integration variable.
const EVENT_TOL: f64 = 1e-12;

fn sys_rhs(y: [f64; 2], params: &ModelParams) -> Result<[f64; 2]> {
    Ok([y[1], model::rhs(y[0], params)?])
}

struct Attempt {
    y1: [f64; 2],
    err: f64,
    k: [[f64; 2]; 7],
}

fn try_step(
    y0: [f64; 2],
    k1: [f64; 2],
    h: f64,
    params: &ModelParams,
    stats: &mut StepStats,
) -> Result<Attempt> {
    let mut k = [[0.0; 2]; 7];
    k[0] = k1;
    for stage in 1..7 {
        let mut y = y0;
        for (j, kj) in k.iter().enumerate().take(stage) {
            let a = A[stage][j];
            if a != 0.0 {
                y[0] += h * a * kj[0];
                y[1] += h * a * kj[1];
            }
        }
        stats.rhs_evals += 1;
        k[stage] = sys_rhs(y, params)?;
    }
    let y1 = {
        let mut y = y0;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            if a != 0.0 {
                y[0] += h * a * kj[0];
                y[1] += h * a * kj[1];
            }
        }
        y
    };
    let tol = params.tol;
    let mut err_sq = 0.0;
    for i in 0..2 {
        let mut e = 0.0;
        for (j, kj) in k.iter().enumerate() {
            e += E[j] * kj[i];
        }
        e *= h;
        let sc = tol.abs_tol + tol.rel_tol * y0[i].abs().max(y1[i].abs());
        err_sq += (e / sc) * (e / sc);
    }
    Ok(Attempt {
        y1,
        err: (0.5 * err_sq).sqrt(),
        k,
    })
}

fn dense_coefficients(y0: [f64; 2], y1: [f64; 2], k: &[[f64; 2]; 7], h: f64) -> [[f64; 5]; 2] {
    let mut c = [[0.0; 5]; 2];
    for i in 0..2 {
        let dy = y1[i] - y0[i];
        let bspl = h * k[0][i] - dy;
        let mut dsum = 0.0;
        for (j, kj) in k.iter().enumerate() {
            dsum += D[j] * kj[i];
        }
        c[i] = [y0[i], dy, bspl, dy - h * k[6][i] - bspl, h * dsum];
    }
    c
}

/// Bisects `g(dense(s))` to a sign change of width `EVENT_TOL` on
/// `[s_lo, s_hi]`, where `g >= 0` at `s_lo` and `g < 0` at `s_hi`.
fn polish_root<G: Fn([f64; 2]) -> f64>(seg: &Segment, g: G, s_lo: f64, s_hi: f64) -> f64 {
    let mut lo = s_lo;
    let mut hi = s_hi;
    while hi - lo > EVENT_TOL {
        let mid = 0.5 * (lo + hi);
        if g(seg.eval(mid)) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Integrates the spec until the first enabled event, the floor, or the
/// horizon. `DomainError` terminations are recorded as events, not errors;
/// step-size underflow without domain pressure is a `StepFailure`.
pub fn integrate(spec: &IvpSpec) -> Result<Trajectory> {
    let params = model::validate(spec.params)?;
    if !(spec.horizon > 0.0) {
        return Err(SolverError::ParamError(format!(
            "horizon must be positive (got {})",
            spec.horizon
        )));
    }
    if !(spec.u_floor < spec.initial.u) {
        return Err(SolverError::ParamError(format!(
            "u_floor = {} must lie below the initial u = {}",
            spec.u_floor, spec.initial.u
        )));
    }
    let sigma = match spec.direction {
        Direction::Forward => 1.0,
        Direction::Backward => -1.0,
    };
    let x0 = spec.initial.x;
    let mut stats = StepStats::default();
    let mut samples = Vec::new();
    let mut segments = Vec::new();
    samples.push(spec.initial);

    let mut y = [spec.initial.u, sigma * spec.initial.du];
    let mut s = 0.0;
    stats.rhs_evals += 1;
    let mut k1 = sys_rhs(y, &params)?;

    let h_max = spec.horizon / 4.0;
    let h_min = 1e-14 * spec.horizon;
    let mut h = 1e-3_f64.min(h_max);
    let mut rejected_last = false;
    let mut domain_pressure = false;

    let emit = |s: f64, y: [f64; 2]| State {
        x: x0 + sigma * s,
        u: y[0],
        du: sigma * y[1],
    };

    let (terminal, s_end) = 'stepping: loop {
        let mut final_step = false;
        if s + h >= spec.horizon {
            h = spec.horizon - s;
            final_step = true;
        }

        let attempt = match try_step(y, k1, h, &params, &mut stats) {
            Ok(a) => a,
            Err(SolverError::DomainError { .. }) => {
                stats.rejected += 1;
                h *= 0.5;
                rejected_last = true;
                domain_pressure = true;
                if h < h_min {
                    break 'stepping (EventKind::DomainError, s);
                }
                continue;
            }
            Err(e) => return Err(e),
        };

        if attempt.err > 1.0 {
            stats.rejected += 1;
            h *= (0.9 * attempt.err.powf(-0.2)).max(0.2);
            rejected_last = true;
            if h < h_min {
                if domain_pressure {
                    break 'stepping (EventKind::DomainError, s);
                }
                return Err(SolverError::StepFailure {
                    x: x0 + sigma * s,
                    h,
                });
            }
            continue;
        }

        stats.accepted += 1;
        stats.min_step = stats.min_step.min(h);
        stats.max_step = stats.max_step.max(h);
        domain_pressure = false;
        let seg = Segment {
            s0: s,
            h,
            c: dense_coefficients(y, attempt.y1, &attempt.k, h),
        };
        segments.push(seg);

        let u0 = y[0];
        let q0 = y[1];
        let u1 = attempt.y1[0];
        let q1 = attempt.y1[1];
        let mut candidates: Vec<(EventKind, f64)> = Vec::new();
        if spec.events.crossed_zero_upward && u1 > 0.0 && u0 <= 0.0 {
            let root = polish_root(&seg, |y| -y[0], s, s + h);
            candidates.push((EventKind::CrossedZeroUpward, root));
        }
        if spec.events.derivative_turned_negative && q1 < 0.0 && q0 >= 0.0 {
            let root = polish_root(&seg, |y| y[1], s, s + h);
            candidates.push((EventKind::DerivativeTurnedNegative, root));
        }
        if spec.events.hit_floor && u1 <= spec.u_floor && u0 > spec.u_floor {
            let root = polish_root(&seg, |y| y[0] - spec.u_floor, s, s + h);
            candidates.push((EventKind::HitFloor, root));
        }
        if let Some(&(kind, root)) = candidates.iter().min_by(|a, b| {
            a.1.total_cmp(&b.1).then_with(|| {
                let rank = |k: EventKind| match k {
                    EventKind::CrossedZeroUpward => 0,
                    EventKind::DerivativeTurnedNegative => 1,
                    _ => 2,
                };
                rank(a.0).cmp(&rank(b.0))
            })
        }) {
            samples.push(emit(root, seg.eval(root)));
            break 'stepping (kind, root);
        }

        s += h;
        y = attempt.y1;
        k1 = attempt.k[6];
        samples.push(emit(s, y));

        if final_step {
            break 'stepping (EventKind::HorizonReached, s);
        }

        let mut fac = if attempt.err == 0.0 {
            10.0
        } else {
            (0.9 * attempt.err.powf(-0.2)).clamp(0.2, 10.0)
        };
        if rejected_last {
            fac = fac.min(1.0);
        }
        rejected_last = false;
        h = (h * fac).min(h_max);
    };

    let last = *samples.last().unwrap();
    Ok(Trajectory {
        terminal_event: terminal,
        event: Some(EventRecord {
            kind: terminal,
            x_event: last.x,
            state_at_event: last,
        }),
        samples,
        step_stats: stats,
        x0,
        sigma,
        s_end,
        segments,
    })
}

/// Maximum deviation `|u''_num - rhs(u)|` over a uniform resampling of the
/// trajectory at the given spacing, with `u''_num` the centered second
/// difference. An integration-quality gate, dominated by the differencing
/// truncation, not the integrator error.
pub fn ode_residual(traj: &Trajectory, params: &ModelParams) -> Result<f64> {
    let span = (traj.x_end() - traj.x_start()).abs();
    if traj.samples.len() < 3 || span == 0.0 {
        return Err(SolverError::ParamError(
            "ode residual needs at least 3 samples over a nonzero span".into(),
        ));
    }
    let spacing = 0.01_f64.min(span / 4.0);
    let n = (span / spacing).floor() as usize;
    let sgn = (traj.x_end() - traj.x_start()).signum();
    let us: Vec<f64> = (0..=n)
        .map(|i| {
            let x = traj.x_start() + sgn * (i as f64) * spacing;
            traj.state_at(x).map(|st| st.u).unwrap_or(f64::NAN)
        })
        .collect();
    let (max, _) = ode_residual_on_grid(&us, spacing, params)?;
    Ok(max)
}

/// Grid-data form of the residual check: maximum `|u''_num - rhs(u)|` over
/// interior nodes of uniformly spaced samples, and the index attaining it.
pub fn ode_residual_on_grid(u: &[f64], spacing: f64, params: &ModelParams) -> Result<(f64, usize)> {
    if u.len() < 4 {
        return Err(SolverError::ParamError(
            "ode residual needs at least 4 samples".into(),
        ));
    }
    let d2 = numdiff::d2(u, spacing);
    let mut max = 0.0;
    let mut at = 1;
    for i in 1..u.len() - 1 {
        let r = (d2[i] - model::rhs(u[i], params)?).abs();
        if r > max {
            max = r;
            at = i;
        }
    }
    Ok((max, at))
}
