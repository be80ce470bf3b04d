//! Full-line wall profiles for both boundary conditions, the independent
//! quadrature-constructed profile oracle, asymptotic tail fits, and the
//! two-sided bracket-inequality checks.
//!
//! The half with `u -> 0` is not integrated backward from the anchor: a
//! backward shot amplifies slope error like `e^{|x|}` and detaches from the
//! wall within the window. Instead that half is grown forward along the
//! unstable manifold of `u = 0`, starting from `u = -eps` with the manifold
//! slope, and the anchor crossing `u = -a` is located as an event; shifting
//! `x` by the crossing places the anchor at `x = 0` with the two halves
//! joining on the same orbit to machine accuracy.

use crate::error::{Result, SolverError};
use crate::integrate::{integrate, Direction, EventKind, EventSet, IvpSpec, StepStats, Trajectory};
use crate::model::{self, ModelParams, State};
use crate::quad::{self, QuadOptions};
use crate::shoot::{self, ShootingOutcome};

/// Uniform grid spacing of assembled profiles.
pub const DEFAULT_SPACING: f64 = 0.01;
/// Default truncation window for the Higgs-to-magnetic profile.
pub const DEFAULT_WINDOW: (f64, f64) = (-20.0, 12.0);
/// Default half-window for the magnetic-to-magnetic profile.
pub const DEFAULT_HALF_WINDOW: f64 = 12.0;
/// Default `u` floor: at `u = -40` the right-hand side sits at its
/// asymptotic limit to machine precision.
pub const DEFAULT_FLOOR: f64 = -40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryCondition {
    /// `u(-inf) = 0`, `u(+inf) = -inf`: Higgs phase to magnetic phase.
    HiggsToMagnetic,
    /// `u(+-inf) = -inf` with maximum `u0` at `x = 0`.
    MagneticToMagnetic,
}

/// A wall profile resampled onto a uniform grid.
#[derive(Debug, Clone)]
pub struct WallProfile {
    pub bc: BoundaryCondition,
    pub params: ModelParams,
    /// `-a` for Higgs-to-magnetic, `u0` for magnetic-to-magnetic.
    pub anchor: f64,
    /// Critical slope (Higgs-to-magnetic only).
    pub b_star: Option<f64>,
    /// Full shooting diagnostics (Higgs-to-magnetic only).
    pub shooting: Option<ShootingOutcome>,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub spacing: f64,
    /// True when the floor was reached before the requested window end and
    /// the grid was truncated there.
    pub truncated: bool,
    /// Combined step counters of the integration legs that built the grid.
    pub stats: StepStats,
}

impl WallProfile {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Index of the grid node at `x = 0`.
    pub fn center_index(&self) -> usize {
        self.grid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap()
    }
}

/// Grows the `u -> 0` half along the unstable manifold and returns the
/// trajectory together with the position of the anchor crossing `u = -a`.
fn left_half(a: f64, params: &ModelParams, reach: f64) -> Result<(Trajectory, f64)> {
    let mut eps = a.min(1.0) * (-(reach + 4.0)).exp();
    for _ in 0..4 {
        eps = eps.max(1e-280);
        let horizon = -eps.ln() + a.max(1.0).ln() + 20.0;
        let spec = IvpSpec {
            params: *params,
            initial: State {
                x: 0.0,
                u: -eps,
                du: -(eps - eps * eps / 6.0),
            },
            direction: Direction::Forward,
            horizon,
            u_floor: -a,
            events: EventSet::floor_only(),
        };
        let traj = integrate(&spec)?;
        if traj.terminal_event != EventKind::HitFloor {
            return Err(SolverError::InsufficientTail(format!(
                "manifold start eps = {eps:e} did not reach the anchor u = -{a} within x = {horizon}"
            )));
        }
        let crossing = traj.x_end();
        if crossing >= reach {
            return Ok((traj, crossing));
        }
        eps *= (crossing - reach - 2.0).exp();
    }
    Err(SolverError::InsufficientTail(format!(
        "could not place the anchor crossing beyond x = {reach} for a = {a}"
    )))
}

/// Solves the Higgs-to-magnetic problem: finds the critical slope, then
/// assembles the profile on `[x_min, x_max]` with `u(0) = -a` and
/// `u'(0) = -b_star`. If the floor is reached before `x_max` the grid is
/// truncated there and flagged.
pub fn solve_higgs_to_magnetic(
    a: f64,
    params: &ModelParams,
    window: (f64, f64),
) -> Result<WallProfile> {
    let params = model::validate(*params)?;
    if !(a > 0.0) {
        return Err(SolverError::ParamError(format!(
            "anchor a must be positive (got {a})"
        )));
    }
    let (x_min, x_max) = window;
    if !(x_min < 0.0 && 0.0 < x_max) {
        return Err(SolverError::ParamError(format!(
            "window must straddle the anchor: x_min < 0 < x_max (got [{x_min}, {x_max}])"
        )));
    }
    let shooting = shoot::find_critical_slope(a, &params)?;
    let spacing = DEFAULT_SPACING;

    let right = integrate(&IvpSpec {
        params,
        initial: State {
            x: 0.0,
            u: -a,
            du: -shooting.b_star,
        },
        direction: Direction::Forward,
        horizon: x_max,
        u_floor: DEFAULT_FLOOR.min(-a - 5.0),
        events: EventSet::floor_only(),
    })?;
    let truncated = right.terminal_event == EventKind::HitFloor;

    let (left, crossing) = left_half(a, &params, -x_min)?;

    let i_min = (x_min / spacing).round() as i64;
    let i_max = (right.x_end() / spacing + 1e-9).floor() as i64;
    let mut grid = Vec::with_capacity((i_max - i_min + 1) as usize);
    let mut u = Vec::with_capacity(grid.capacity());
    let mut du = Vec::with_capacity(grid.capacity());
    for i in i_min..=i_max {
        let x = i as f64 * spacing;
        let st = if i < 0 {
            left.state_at(x + crossing)
        } else {
            right.state_at(x)
        }
        .ok_or_else(|| {
            SolverError::InsufficientTail(format!("no dense coverage at grid node x = {x}"))
        })?;
        grid.push(x);
        u.push(st.u);
        du.push(st.du);
    }

    let stats = right.step_stats.merged(&left.step_stats);
    Ok(WallProfile {
        bc: BoundaryCondition::HiggsToMagnetic,
        params,
        anchor: -a,
        b_star: Some(shooting.b_star),
        shooting: Some(shooting),
        grid,
        u,
        du,
        spacing,
        truncated,
        stats,
    })
}

/// Solves the magnetic-to-magnetic problem: integrates from the maximum
/// `(u, u') = (u0, 0)` at `x = 0` rightward and reflects, so the symmetry
/// of the autonomous equation is built in.
pub fn solve_magnetic_to_magnetic(
    u0: f64,
    params: &ModelParams,
    half_window: f64,
) -> Result<WallProfile> {
    let params = model::validate(*params)?;
    if u0 == 0.0 {
        return Err(SolverError::DegenerateProfile(
            "u0 = 0 is the vacuum equilibrium, not a wall".into(),
        ));
    }
    if !(u0 < 0.0) {
        return Err(SolverError::ParamError(format!(
            "u0 must be negative (got {u0})"
        )));
    }
    if !(half_window > 0.0) {
        return Err(SolverError::ParamError(format!(
            "half_window must be positive (got {half_window})"
        )));
    }
    let spacing = DEFAULT_SPACING;
    let traj = integrate(&IvpSpec {
        params,
        initial: State {
            x: 0.0,
            u: u0,
            du: 0.0,
        },
        direction: Direction::Forward,
        horizon: half_window,
        u_floor: DEFAULT_FLOOR.min(u0 - 10.0),
        events: EventSet::floor_only(),
    })?;
    let truncated = traj.terminal_event == EventKind::HitFloor;
    let i_max = (traj.x_end() / spacing + 1e-9).floor() as i64;

    let mut right_u = Vec::with_capacity(i_max as usize + 1);
    let mut right_du = Vec::with_capacity(i_max as usize + 1);
    for i in 0..=i_max {
        let x = i as f64 * spacing;
        let st = traj.state_at(x).ok_or_else(|| {
            SolverError::InsufficientTail(format!("no dense coverage at grid node x = {x}"))
        })?;
        right_u.push(st.u);
        right_du.push(st.du);
    }

    let n = i_max as usize;
    let mut grid = Vec::with_capacity(2 * n + 1);
    let mut u = Vec::with_capacity(2 * n + 1);
    let mut du = Vec::with_capacity(2 * n + 1);
    for i in -(i_max)..=i_max {
        let x = i as f64 * spacing;
        let j = i.unsigned_abs() as usize;
        grid.push(x);
        u.push(right_u[j]);
        du.push(if i < 0 { -right_du[j] } else { right_du[j] });
    }

    Ok(WallProfile {
        bc: BoundaryCondition::MagneticToMagnetic,
        params,
        anchor: u0,
        b_star: None,
        shooting: None,
        grid,
        u,
        du,
        spacing,
        truncated,
        stats: traj.step_stats,
    })
}

/// Quadrature-constructed profile oracle: positions `x(u)` from the first
/// integral alone, independent of the initial-value integrator.
///
/// For the Higgs-to-magnetic condition (right of the anchor `-a`)
/// `x(u) = integral from u to -a of ds/sqrt(G(s))`. For
/// magnetic-to-magnetic (`x > 0`) the square-root endpoint singularity at
/// `u -> u0` is removed by `u = u0 - s^2` before integrating.
pub fn profile_by_quadrature(
    anchor: f64,
    params: &ModelParams,
    bc: BoundaryCondition,
    u_samples: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let params = model::validate(*params)?;
    if !(anchor < 0.0) {
        return Err(SolverError::ParamError(format!(
            "anchor must be negative (got {anchor})"
        )));
    }
    for pair in u_samples.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(SolverError::ParamError(
                "u_samples must be strictly decreasing".into(),
            ));
        }
    }
    let opts = QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_subdiv: 400,
    };
    let mut out = Vec::with_capacity(u_samples.len());
    match bc {
        BoundaryCondition::HiggsToMagnetic => {
            if u_samples.iter().any(|&v| v > anchor) {
                return Err(SolverError::ParamError(
                    "u_samples must lie at or below the anchor -a".into(),
                ));
            }
            let table = if params.beta == 0.0 {
                None
            } else {
                let lowest = u_samples.last().copied().unwrap_or(anchor) - 1.0;
                Some(model::FirstIntegralTable::build(&params, lowest, 0.01)?)
            };
            let g = |s: f64| -> f64 {
                match &table {
                    None => 2.0 * (s.exp_m1() - s),
                    Some(t) => t.eval(s).unwrap_or(f64::NAN),
                }
            };
            for &us in u_samples {
                let x = quad::integrate(|s| 1.0 / g(s).sqrt(), us, anchor, &opts)?;
                out.push((x, us));
            }
        }
        BoundaryCondition::MagneticToMagnetic => {
            if u_samples.iter().any(|&v| v >= anchor) {
                return Err(SolverError::ParamError(
                    "u_samples must lie strictly below the maximum u0".into(),
                ));
            }
            for &us in u_samples {
                let s_max = (anchor - us).sqrt();
                let x = quad::integrate(
                    |s| {
                        let v = anchor - s * s;
                        let d = model::first_integral_diff(v, anchor, &params).unwrap_or(f64::NAN);
                        2.0 * s / d.sqrt()
                    },
                    0.0,
                    s_max,
                    &opts,
                )?;
                out.push((x, us));
            }
        }
    }
    Ok(out)
}

/// Fitted asymptotics of a profile.
#[derive(Debug, Clone, Copy)]
pub struct TailFit {
    /// Exponential decay rate of the `u -> 0` tail, fitted as the
    /// least-squares slope of `ln|u|` against `x` (Higgs-to-magnetic only).
    pub lambda_left: Option<f64>,
    pub left_window: Option<(f64, f64)>,
    /// RMS deviation of `ln|u|` from the fitted line.
    pub left_residual: Option<f64>,
    /// Quadratic coefficient of the `u -> -inf` tail, `u ~ -c x^2/2`,
    /// measured as the mean of `-u''` (finite differences) over the window.
    pub c_right: f64,
    /// The same mean taken from `rhs(u)` samples instead of differencing.
    pub c_right_model: f64,
    pub right_window: (f64, f64),
    /// RMS deviation of `-u''` from `c_right`, relative to `c_right`.
    pub right_residual: f64,
}

/// Fits both asymptotic tails. Needs the profile to reach `|u| < 1e-3` on
/// the left (Higgs-to-magnetic) and `u < -25` on the right.
pub fn fit_tails(profile: &WallProfile) -> Result<TailFit> {
    let params = &profile.params;
    let h = profile.spacing;
    let n = profile.len();

    let (lambda_left, left_window, left_residual) = match profile.bc {
        BoundaryCondition::MagneticToMagnetic => (None, None, None),
        BoundaryCondition::HiggsToMagnetic => {
            let pts: Vec<(f64, f64)> = profile
                .grid
                .iter()
                .zip(&profile.u)
                .filter(|(_, &u)| (-1e-3..=-1e-6).contains(&u))
                .map(|(&x, &u)| (x, (-u).ln()))
                .collect();
            if pts.len() < 10 {
                return Err(SolverError::InsufficientTail(format!(
                    "only {} nodes with |u| in [1e-6, 1e-3] on the left",
                    pts.len()
                )));
            }
            let m = pts.len() as f64;
            let xm = pts.iter().map(|p| p.0).sum::<f64>() / m;
            let ym = pts.iter().map(|p| p.1).sum::<f64>() / m;
            let sxy: f64 = pts.iter().map(|p| (p.0 - xm) * (p.1 - ym)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - xm) * (p.0 - xm)).sum();
            let slope = sxy / sxx;
            let intercept = ym - slope * xm;
            let rms = (pts
                .iter()
                .map(|p| (p.1 - slope * p.0 - intercept).powi(2))
                .sum::<f64>()
                / m)
                .sqrt();
            (
                Some(slope),
                Some((pts[0].0, pts[pts.len() - 1].0)),
                Some(rms),
            )
        }
    };

    let right_idx: Vec<usize> = (1..n - 1)
        .filter(|&i| profile.grid[i] > 0.0 && profile.u[i] < -25.0)
        .collect();
    if right_idx.len() < 10 {
        return Err(SolverError::InsufficientTail(format!(
            "only {} interior nodes with u < -25 on the right",
            right_idx.len()
        )));
    }
    let m = right_idx.len() as f64;
    let mut c_sum = 0.0;
    let mut model_sum = 0.0;
    for &i in &right_idx {
        c_sum += -(profile.u[i - 1] - 2.0 * profile.u[i] + profile.u[i + 1]) / (h * h);
        model_sum += -model::rhs(profile.u[i], params)?;
    }
    let c_right = c_sum / m;
    let c_right_model = model_sum / m;
    let mut rss = 0.0;
    for &i in &right_idx {
        let c = -(profile.u[i - 1] - 2.0 * profile.u[i] + profile.u[i + 1]) / (h * h);
        rss += (c - c_right) * (c - c_right);
    }
    let right_residual = (rss / m).sqrt() / c_right.abs();

    Ok(TailFit {
        lambda_left,
        left_window,
        left_residual,
        c_right,
        c_right_model,
        right_window: (
            profile.grid[right_idx[0]],
            profile.grid[right_idx[right_idx.len() - 1]],
        ),
        right_residual,
    })
}

/// Pointwise verification of the two-sided bracket
/// `D_lo(u) <= (u')^2 <= D_lo(u) * 2/sqrt(4-beta)` with
/// `D_lo(u) = 2(e^u - u - 1) - 2(e^{u_ref} - u_ref - 1)`, plus spot checks
/// of the corresponding two-sided `x(u)` bounds.
#[derive(Debug, Clone, Copy)]
pub struct BracketReport {
    /// Minimum of `(u')^2 - D_lo` over the grid.
    pub min_lower_margin: f64,
    /// Minimum of `D_hi - (u')^2` over the grid.
    pub min_upper_margin: f64,
    /// Nodes violating a bound beyond slack `1e-8 (1 + D_hi)`.
    pub violations: usize,
    /// At `beta = 0` the bounds coincide: maximum of
    /// `|(u')^2 - D_lo| / (1 + D_lo)`.
    pub coincidence_gap: Option<f64>,
    /// Minimum of `x - X_lo(u)` over the spot-checked nodes.
    pub x_min_lower_margin: f64,
    /// Minimum of `X_hi(u) - x` over the spot-checked nodes.
    pub x_min_upper_margin: f64,
}

fn closed_form_lower(u: f64, u_ref: f64) -> f64 {
    let delta = u - u_ref;
    2.0 * (u_ref.exp() * delta.exp_m1() - delta)
}

pub fn check_brackets(profile: &WallProfile) -> Result<BracketReport> {
    let beta = profile.params.beta;
    let ratio = 2.0 / (4.0 - beta).sqrt();
    let u_ref = match profile.bc {
        BoundaryCondition::HiggsToMagnetic => 0.0,
        BoundaryCondition::MagneticToMagnetic => profile.anchor,
    };

    let mut min_lower = f64::INFINITY;
    let mut min_upper = f64::INFINITY;
    let mut violations = 0;
    let mut gap = 0.0_f64;
    for (&u, &du) in profile.u.iter().zip(&profile.du) {
        let d_lo = closed_form_lower(u, u_ref);
        let d_hi = ratio * d_lo;
        let sq = du * du;
        let lower_margin = sq - d_lo;
        let upper_margin = d_hi - sq;
        min_lower = min_lower.min(lower_margin);
        min_upper = min_upper.min(upper_margin);
        let slack = 1e-8 * (1.0 + d_hi);
        if lower_margin < -slack || upper_margin < -slack {
            violations += 1;
        }
        if beta == 0.0 {
            gap = gap.max((sq - d_lo).abs() / (1.0 + d_lo));
        }
    }

    let opts = QuadOptions {
        abs_tol: 1e-10,
        rel_tol: 1e-10,
        max_subdiv: 400,
    };
    let mut x_min_lower = f64::INFINITY;
    let mut x_min_upper = f64::INFINITY;
    let spot: Vec<usize> = (0..profile.len())
        .filter(|&i| profile.grid[i] > 0.5 && profile.u[i] < u_ref - 0.5)
        .step_by(200)
        .collect();
    for &i in &spot {
        let u = profile.u[i];
        let x = profile.grid[i];
        let (x_lo, x_hi) = match profile.bc {
            BoundaryCondition::HiggsToMagnetic => {
                let anchor = profile.anchor;
                let lo = quad::integrate(
                    |s| 1.0 / (ratio * closed_form_lower(s, u_ref)).sqrt(),
                    u,
                    anchor,
                    &opts,
                )?;
                let hi = quad::integrate(
                    |s| 1.0 / closed_form_lower(s, u_ref).sqrt(),
                    u,
                    anchor,
                    &opts,
                )?;
                (lo, hi)
            }
            BoundaryCondition::MagneticToMagnetic => {
                let s_max = (u_ref - u).sqrt();
                let lo = quad::integrate(
                    |s| 2.0 * s / (ratio * closed_form_lower(u_ref - s * s, u_ref)).sqrt(),
                    0.0,
                    s_max,
                    &opts,
                )?;
                let hi = quad::integrate(
                    |s| 2.0 * s / closed_form_lower(u_ref - s * s, u_ref).sqrt(),
                    0.0,
                    s_max,
                    &opts,
                )?;
                (lo, hi)
            }
        };
        x_min_lower = x_min_lower.min(x - x_lo);
        x_min_upper = x_min_upper.min(x_hi - x);
    }
    if spot.is_empty() {
        x_min_lower = 0.0;
        x_min_upper = 0.0;
    }

    Ok(BracketReport {
        min_lower_margin: min_lower,
        min_upper_margin: min_upper,
        violations,
        coincidence_gap: (beta == 0.0).then_some(gap),
        x_min_lower_margin: x_min_lower,
        x_min_upper_margin: x_min_upper,
    })
}

/// Maximum normalized first-integral residual
/// `|(u')^2 - D| / (1 + |D|)` over grid data, with `D = G(u)` for the
/// Higgs-to-magnetic condition and `D = G(u) - G(u_max)` (reference at the
/// maximum sample) for magnetic-to-magnetic. Returns the maximum and the
/// index attaining it.
///
/// `G` along the samples is accumulated by single Kronrod panels between
/// consecutive nodes on top of one absolute anchor evaluation, which keeps
/// the per-node cost flat.
pub fn first_integral_residual_on(
    u: &[f64],
    du: &[f64],
    params: &ModelParams,
    bc: BoundaryCondition,
) -> Result<(f64, usize)> {
    if u.len() != du.len() || u.is_empty() {
        return Err(SolverError::ParamError(
            "u and du must be equal-length nonempty arrays".into(),
        ));
    }
    if u.iter().any(|&v| v > 0.0) {
        let idx = u.iter().position(|&v| v > 0.0).unwrap();
        return Ok((f64::INFINITY, idx));
    }
    let n = u.len();
    let beta = params.beta;
    let mut g = vec![0.0; n];
    if beta == 0.0 {
        for i in 0..n {
            g[i] = 2.0 * (u[i].exp_m1() - u[i]);
        }
    } else {
        g[0] = model::first_integral(u[0], params)?;
        let gint = |s: f64| {
            let w = s.exp_m1();
            2.0 * w / (1.0 - 0.25 * beta * w * w).sqrt()
        };
        for i in 1..n {
            g[i] = g[i - 1] + quad::gk15(&gint, u[i - 1], u[i]).value;
        }
    }
    let g_ref = match bc {
        BoundaryCondition::HiggsToMagnetic => 0.0,
        BoundaryCondition::MagneticToMagnetic => {
            let i_max = (0..n).max_by(|&a, &b| u[a].total_cmp(&u[b])).unwrap();
            g[i_max]
        }
    };
    let mut worst = 0.0;
    let mut at = 0;
    for i in 0..n {
        let d = g[i] - g_ref;
        let r = (du[i] * du[i] - d).abs() / (1.0 + d.abs());
        if r > worst {
            worst = r;
            at = i;
        }
    }
    Ok((worst, at))
}

/// First-integral residual of an assembled profile.
pub fn first_integral_residual(profile: &WallProfile) -> Result<(f64, usize)> {
    first_integral_residual_on(&profile.u, &profile.du, &profile.params, profile.bc)
}
