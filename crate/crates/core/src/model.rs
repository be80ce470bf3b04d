//! The wall equation's right-hand side, the Born-Infeld potential, the
//! first integral `G`, and parameter validation.

use crate::error::{Result, SolverError};
use crate::quad::{self, QuadOptions};

/// Upper admissible bound of the Born parameter.
pub const BETA_MAX: f64 = 4.0;

/// Radicand guard: the equation is evaluated only where
/// `1 - (beta/4)(e^u - 1)^2` stays above this threshold, keeping the
/// derivative away from its blow-up at the singular boundary.
pub const RADICAND_GUARD: f64 = 1e-14;

/// The sign choice of the first-order (BPS) system. The Lower branch is the
/// image of the Upper one under `a -> -a`, `F12 -> -F12`; all formulas are
/// implemented for Upper and mapped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignBranch {
    Upper,
    Lower,
}

impl SignBranch {
    /// `+1` for Upper, `-1` for Lower.
    pub fn signum(self) -> f64 {
        match self {
            SignBranch::Upper => 1.0,
            SignBranch::Lower => -1.0,
        }
    }
}

/// Absolute/relative integration tolerances plus the bisection width target
/// for the critical slope.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub slope_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            slope_tol: 1e-12,
        }
    }
}

/// Model parameters: Born parameter `beta = 1/b^2`, branch sign, and
/// numerical tolerances.
#[derive(Debug, Clone, Copy)]
pub struct ModelParams {
    pub beta: f64,
    pub sign_branch: SignBranch,
    pub tol: Tolerances,
}

impl ModelParams {
    /// Validated parameters with default branch and tolerances.
    pub fn new(beta: f64) -> Result<Self> {
        validate(ModelParams {
            beta,
            sign_branch: SignBranch::Upper,
            tol: Tolerances::default(),
        })
    }
}

/// One point of a trajectory: position, `u = 2 ln f`, and `u' = du/dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub x: f64,
    pub u: f64,
    pub du: f64,
}

/// Checks the admissible parameter region: `0 <= beta < 4`, positive
/// tolerances. Returns the parameters unchanged on success.
pub fn validate(params: ModelParams) -> Result<ModelParams> {
    let beta = params.beta;
    if !beta.is_finite() || beta < 0.0 {
        return Err(SolverError::ParamError(format!(
            "beta = {beta} is not admissible: the Born parameter beta = 1/b^2 must be nonnegative"
        )));
    }
    if beta >= BETA_MAX {
        return Err(SolverError::ParamError(format!(
            "beta = {beta} is not admissible: wall solutions exist only for beta < 4"
        )));
    }
    let t = params.tol;
    if !(t.abs_tol > 0.0 && t.rel_tol > 0.0 && t.slope_tol > 0.0) {
        return Err(SolverError::ParamError(format!(
            "tolerances must be strictly positive (abs_tol = {}, rel_tol = {}, slope_tol = {})",
            t.abs_tol, t.rel_tol, t.slope_tol
        )));
    }
    Ok(params)
}

/// Right-hand side of `u'' = (e^u - 1)/sqrt(1 - (beta/4)(e^u - 1)^2)`.
///
/// The radicand is automatically positive for `u <= 0`; it can reach zero
/// only for `u > 0`, where the trajectory has left the equation's validity
/// region and a `DomainError` is returned.
pub fn rhs(u: f64, params: &ModelParams) -> Result<f64> {
    let w = u.exp_m1();
    let radicand = 1.0 - 0.25 * params.beta * w * w;
    if radicand <= RADICAND_GUARD {
        return Err(SolverError::DomainError { u, radicand });
    }
    Ok(w / radicand.sqrt())
}

/// The `u -> -inf` limit of the right-hand side, `-2/sqrt(4 - beta)`.
pub fn rhs_limit(params: &ModelParams) -> f64 {
    -2.0 / (4.0 - params.beta).sqrt()
}

/// Born-Infeld potential `V(|phi|^2) = (1/beta)(1 - sqrt(1 - (beta/4)(|phi|^2 - 1)^2))`,
/// evaluated in the algebraically equivalent form
/// `w^2 / (4 (1 + sqrt(1 - (beta/4) w^2)))` with `w = |phi|^2 - 1`, which
/// remains finite at `beta = 0` and reproduces the analytic limit
/// `(1/8) w^2` there.
pub fn potential(phi_sq: f64, params: &ModelParams) -> Result<f64> {
    let w = phi_sq - 1.0;
    let radicand = 1.0 - 0.25 * params.beta * w * w;
    if radicand < 0.0 {
        return Err(SolverError::DomainError {
            u: phi_sq,
            radicand,
        });
    }
    Ok(w * w / (4.0 * (1.0 + radicand.sqrt())))
}

/// Integrand of the first integral, `2 (e^s - 1)/sqrt(1 - (beta/4)(e^s - 1)^2)`.
fn g_integrand(s: f64, beta: f64) -> f64 {
    let w = s.exp_m1();
    let radicand = 1.0 - 0.25 * beta * w * w;
    2.0 * w / radicand.sqrt()
}

fn quad_options(params: &ModelParams) -> QuadOptions {
    QuadOptions {
        abs_tol: params.tol.abs_tol.min(1e-13),
        rel_tol: 1e-13,
        max_subdiv: 400,
    }
}

/// First integral `G(u)`: the integral of the `g` integrand from 0 to `u`,
/// nonnegative for `u <= 0`. Uses the closed form `2(e^u - u - 1)` at
/// `beta = 0` and adaptive quadrature otherwise.
pub fn first_integral(u: f64, params: &ModelParams) -> Result<f64> {
    if u > 0.0 {
        return Err(SolverError::ParamError(format!(
            "first integral is defined on u <= 0 (got u = {u})"
        )));
    }
    if u == 0.0 {
        return Ok(0.0);
    }
    if params.beta == 0.0 {
        return Ok(2.0 * (u.exp_m1() - u));
    }
    let beta = params.beta;
    let value = quad::integrate(|s| g_integrand(s, beta), u, 0.0, &quad_options(params))?;
    Ok(-value)
}

/// Difference `G(u) - G(u_ref)` computed without forming the two large
/// values separately, so that nearby arguments do not cancel.
pub fn first_integral_diff(u: f64, u_ref: f64, params: &ModelParams) -> Result<f64> {
    if u > 0.0 || u_ref > 0.0 {
        return Err(SolverError::ParamError(format!(
            "first integral is defined on u <= 0 (got u = {u}, u_ref = {u_ref})"
        )));
    }
    if u == u_ref {
        return Ok(0.0);
    }
    if params.beta == 0.0 {
        let delta = u - u_ref;
        return Ok(2.0 * (u_ref.exp() * delta.exp_m1() - delta));
    }
    let beta = params.beta;
    let value = quad::integrate(|s| g_integrand(s, beta), u, u_ref, &quad_options(params))?;
    Ok(-value)
}

/// Memoized monotone table of `G` on a uniform `u`-grid with cubic Hermite
/// interpolation between nodes; the exact derivative `G'(u) = 2 rhs(u)` is
/// stored alongside each node. Built once, then immutable.
#[derive(Debug, Clone)]
pub struct FirstIntegralTable {
    beta: f64,
    spacing: f64,
    /// `(u_i, G(u_i))` with `u_i = -i * spacing`, ordered from 0 downward.
    nodes: Vec<(f64, f64)>,
    derivs: Vec<f64>,
}

impl FirstIntegralTable {
    /// Tabulates `G` from 0 down to at least `u_min` at the given spacing.
    pub fn build(params: &ModelParams, u_min: f64, spacing: f64) -> Result<Self> {
        if !(u_min < 0.0) || !(spacing > 0.0) {
            return Err(SolverError::ParamError(format!(
                "table needs u_min < 0 and spacing > 0 (got u_min = {u_min}, spacing = {spacing})"
            )));
        }
        let beta = params.beta;
        let n = ((-u_min) / spacing).ceil() as usize + 1;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut derivs = Vec::with_capacity(n + 1);
        nodes.push((0.0, 0.0));
        derivs.push(2.0 * rhs(0.0, params)?);
        let mut acc = 0.0;
        for i in 1..=n {
            let hi = -((i - 1) as f64) * spacing;
            let lo = -(i as f64) * spacing;
            let panel = if beta == 0.0 {
                2.0 * (lo.exp_m1() - lo) - 2.0 * (hi.exp_m1() - hi)
            } else {
                -quad::gk15(&|s| g_integrand(s, beta), lo, hi).value
            };
            acc += panel;
            nodes.push((lo, acc));
            derivs.push(2.0 * rhs(lo, params)?);
        }
        Ok(Self {
            beta,
            spacing,
            nodes,
            derivs,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nodes(&self) -> &[(f64, f64)] {
        &self.nodes
    }

    /// Lowest tabulated `u`.
    pub fn u_min(&self) -> f64 {
        self.nodes.last().unwrap().0
    }

    /// Cubic Hermite evaluation of `G(u)` for `u` inside the tabulated range.
    pub fn eval(&self, u: f64) -> Result<f64> {
        if u > 0.0 || u < self.u_min() {
            return Err(SolverError::ParamError(format!(
                "u = {u} outside tabulated range [{}, 0]",
                self.u_min()
            )));
        }
        let idx = ((-u) / self.spacing) as usize;
        let idx = idx.min(self.nodes.len() - 2);
        let (u0, g0) = self.nodes[idx];
        let (u1, g1) = self.nodes[idx + 1];
        let d0 = self.derivs[idx];
        let d1 = self.derivs[idx + 1];
        let h = u1 - u0;
        let t = (u - u0) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        Ok(h00 * g0 + h10 * h * d0 + h01 * g1 + h11 * h * d1)
    }
}
