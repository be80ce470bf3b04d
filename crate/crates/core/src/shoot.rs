//! Dynamical shooting: classify initial slopes into the undershoot set
//! (derivative turns negative), the overshoot set (`u` crosses zero), or
//! the undetermined band between them, and bisect to the unique critical
//! slope. Every result is cross-checked against the first-integral oracle
//! `b* = sqrt(G(-a))`.
//!
//! The shooting runs in the variable `t = -x`: the initial state is
//! `u(0) = -a`, `u'(0) = +b` with `b >= 0`, integrated forward in `t`.

use crate::error::{Result, SolverError};
use crate::integrate::{integrate, Direction, EventKind, EventRecord, EventSet, IvpSpec};
use crate::model::{self, ModelParams, State};

/// Horizon for slope classification. At `t = 40` the left tail has decayed
/// to `e^{-40}`, so the band of slopes that remain undetermined is far
/// narrower than any representable slope perturbation.
pub const DEFAULT_HORIZON: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlopeClassKind {
    /// The derivative turned negative: the trajectory falls away to
    /// `u -> -inf` (undershoot).
    BMinus,
    /// `u` crossed zero while rising (overshoot).
    BPlus,
    /// Neither event fired before the horizon; the numerical stand-in for
    /// the critical set.
    UndeterminedWithinHorizon,
}

/// What decided the classification: the terminating event, or the state at
/// the horizon.
#[derive(Debug, Clone, Copy)]
pub enum ClassWitness {
    Event(EventRecord),
    Horizon(State),
}

#[derive(Debug, Clone, Copy)]
pub struct SlopeClass {
    pub value: SlopeClassKind,
    pub witness: ClassWitness,
}

/// Result of the bisection for the critical slope.
#[derive(Debug, Clone, Copy)]
pub struct ShootingOutcome {
    pub b_star: f64,
    /// Final bracket: `bracket.0` classified undershoot, `bracket.1`
    /// overshoot, `b_star` the midpoint.
    pub bracket: (f64, f64),
    /// Total classification calls spent (seeding, doubling, bisection).
    pub iterations: u32,
    /// `sqrt(G(-a))`, the slope forced by the first integral.
    pub oracle_slope: f64,
    /// `|b_star - oracle_slope| / oracle_slope`.
    pub agreement: f64,
}

/// Classifies one trial slope at the default horizon.
pub fn classify_slope(b: f64, a: f64, params: &ModelParams) -> Result<SlopeClass> {
    classify_slope_with(b, a, params, DEFAULT_HORIZON)
}

/// Classifies one trial slope with an explicit horizon.
pub fn classify_slope_with(
    b: f64,
    a: f64,
    params: &ModelParams,
    horizon: f64,
) -> Result<SlopeClass> {
    if !(a > 0.0) {
        return Err(SolverError::ParamError(format!(
            "shooting anchor a must be positive (got {a})"
        )));
    }
    if !(b >= 0.0) {
        return Err(SolverError::ParamError(format!(
            "trial slope must be nonnegative (got {b})"
        )));
    }
    let spec = IvpSpec {
        params: *params,
        initial: State {
            x: 0.0,
            u: -a,
            du: b,
        },
        direction: Direction::Forward,
        horizon,
        u_floor: -a - 1000.0,
        events: EventSet::shooting(),
    };
    let traj = integrate(&spec)?;
    let ev = traj
        .event
        .expect("integration always records its terminal event");
    let class = match traj.terminal_event {
        EventKind::DerivativeTurnedNegative => SlopeClass {
            value: SlopeClassKind::BMinus,
            witness: ClassWitness::Event(ev),
        },
        EventKind::CrossedZeroUpward => SlopeClass {
            value: SlopeClassKind::BPlus,
            witness: ClassWitness::Event(ev),
        },
        // The radicand can only vanish at u > 0, which requires having
        // crossed zero: an overshoot with a domain-exit witness.
        EventKind::DomainError => SlopeClass {
            value: SlopeClassKind::BPlus,
            witness: ClassWitness::Event(ev),
        },
        EventKind::HorizonReached => SlopeClass {
            value: SlopeClassKind::UndeterminedWithinHorizon,
            witness: ClassWitness::Horizon(traj.final_state()),
        },
        EventKind::HitFloor => {
            return Err(SolverError::BracketInconsistency(format!(
                "trajectory for b = {b} reached the backstop floor without a qualitative event"
            )))
        }
    };
    Ok(class)
}

/// The exact critical slope forced by the first integral with the Higgs
/// boundary condition: `sqrt(G(-a))`.
pub fn critical_slope_oracle(a: f64, params: &ModelParams) -> Result<f64> {
    if !(a >= 0.0) {
        return Err(SolverError::ParamError(format!(
            "shooting anchor a must be nonnegative (got {a})"
        )));
    }
    Ok(model::first_integral(-a, params)?.sqrt())
}

/// Bisects to the critical slope at the default horizon.
pub fn find_critical_slope(a: f64, params: &ModelParams) -> Result<ShootingOutcome> {
    find_critical_slope_with(a, params, DEFAULT_HORIZON)
}

/// Bisects to the critical slope: seeds `b_lo = 0` (a proven undershoot),
/// doubles `b_hi` from 1 until it overshoots, then bisects until the
/// bracket is narrower than `slope_tol`.
pub fn find_critical_slope_with(
    a: f64,
    params: &ModelParams,
    horizon: f64,
) -> Result<ShootingOutcome> {
    let params = model::validate(*params)?;
    let oracle_slope = critical_slope_oracle(a, &params)?;
    let mut iterations: u32 = 0;

    fn classify(
        b: f64,
        a: f64,
        params: &ModelParams,
        horizon: f64,
        n: &mut u32,
    ) -> Result<SlopeClassKind> {
        *n += 1;
        Ok(classify_slope_with(b, a, params, horizon)?.value)
    }

    let lo = 0.0;
    match classify(lo, a, &params, horizon, &mut iterations)? {
        SlopeClassKind::BMinus => {}
        other => {
            return Err(SolverError::BracketInconsistency(format!(
                "b = 0 must undershoot but classified {other:?}"
            )))
        }
    }

    let mut lo = lo;
    let mut hi = 1.0;
    let mut doublings = 0;
    loop {
        match classify(hi, a, &params, horizon, &mut iterations)? {
            SlopeClassKind::BPlus => break,
            SlopeClassKind::BMinus => {
                lo = hi;
                hi *= 2.0;
                doublings += 1;
                if doublings >= 64 {
                    return Err(SolverError::NoUpperBracket { last: hi });
                }
            }
            SlopeClassKind::UndeterminedWithinHorizon => {
                // An undetermined slope lies within the horizon-truncation
                // width of the critical slope, which is far below slope_tol.
                return Ok(outcome(hi, (lo, hi), iterations, oracle_slope));
            }
        }
    }

    while hi - lo > params.tol.slope_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match classify(mid, a, &params, horizon, &mut iterations)? {
            SlopeClassKind::BMinus => lo = mid,
            SlopeClassKind::BPlus => hi = mid,
            SlopeClassKind::UndeterminedWithinHorizon => {
                return Ok(outcome(mid, (lo, hi), iterations, oracle_slope));
            }
        }
    }

    Ok(outcome(0.5 * (lo + hi), (lo, hi), iterations, oracle_slope))
}

fn outcome(
    b_star: f64,
    bracket: (f64, f64),
    iterations: u32,
    oracle_slope: f64,
) -> ShootingOutcome {
    let agreement = if oracle_slope > 0.0 {
        (b_star - oracle_slope).abs() / oracle_slope
    } else {
        b_star.abs()
    };
    ShootingOutcome {
        b_star,
        bracket,
        iterations,
        oracle_slope,
        agreement,
    }
}

/// Classifies an ascending list of slopes and checks that no undershoot
/// appears above an overshoot; an inversion raises `BracketInconsistency`
/// instead of being silently accepted.
pub fn classify_grid(a: f64, params: &ModelParams, bs: &[f64]) -> Result<Vec<SlopeClass>> {
    let mut out = Vec::with_capacity(bs.len());
    let mut first_bplus: Option<f64> = None;
    for &b in bs {
        let class = classify_slope(b, a, params)?;
        match class.value {
            SlopeClassKind::BPlus => {
                if first_bplus.is_none() {
                    first_bplus = Some(b);
                }
            }
            SlopeClassKind::BMinus => {
                if let Some(bp) = first_bplus {
                    return Err(SolverError::BracketInconsistency(format!(
                        "undershoot at b = {b} above overshoot at b = {bp}"
                    )));
                }
            }
            SlopeClassKind::UndeterminedWithinHorizon => {}
        }
        out.push(class);
    }
    Ok(out)
}
