//! Diagnostics report: residual maxima, tail fits, bracket margins, gate
//! verdicts, and deterministic step counters, serialized as JSON.
//!
//! The report deliberately contains no timestamps or wall-clock times, so
//! identical runs produce byte-identical files; timing goes to stderr.

use anyhow::Result;
use serde::{Deserialize, Serialize};

use bpswall_core::{
    bps_residual, check_brackets, el_residual, energy_identity, far_field_energy_density,
    first_integral_residual, fit_tails, ode_residual_on_grid, BoundaryCondition, FieldProfile,
    SignBranch, SolverError, WallProfile,
};

/// Normalized first-integral residual bound.
pub const GATE_FIRST_INTEGRAL: f64 = 1e-9;
/// Interior second-difference equation residual bound.
pub const GATE_ODE: f64 = 1e-5;
/// First-order field residual bound (r1, r2, and the F12 agreement).
pub const GATE_BPS: f64 = 1e-6;
/// Second-order field residual bound (r3, r4).
pub const GATE_EL: f64 = 1e-4;
/// Pointwise energy identity bound.
pub const GATE_ENERGY: f64 = 1e-6;
/// Critical slope vs quadrature oracle relative bound.
pub const GATE_AGREEMENT: f64 = 1e-8;
/// Mirror symmetry bound for the symmetric wall.
pub const GATE_SYMMETRY: f64 = 1e-8;
/// Center slope bound for the symmetric wall.
pub const GATE_CENTER_SLOPE: f64 = 1e-10;
/// Allowed deviation of the left tail rate from 1.
pub const GATE_LAMBDA: f64 = 0.05;
/// Allowed deviation of the right tail coefficient from 2/sqrt(4-beta).
pub const GATE_C_RIGHT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ResEntry {
    pub max: f64,
    pub at_x: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Residuals {
    pub first_integral: ResEntry,
    pub ode: ResEntry,
    pub bps_r1: ResEntry,
    pub bps_r2: ResEntry,
    pub el_r3: ResEntry,
    pub el_r4: ResEntry,
    pub energy_identity: ResEntry,
    pub f12_agreement: ResEntry,
    /// Mirror asymmetry max |u(x) - u(-x)| (symmetric wall only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<ResEntry>,
    /// u'(0) (symmetric wall only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub du_center: Option<f64>,
    /// Verify only: max |f column - e^{u/2}| recomputed from the file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_f: Option<f64>,
    /// Verify only: max |a column + s u'/2| recomputed from the file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column_a: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TailSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_left: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_residual: Option<f64>,
    pub c_right: f64,
    pub c_right_model: f64,
    pub predicted_c_right: f64,
    pub right_residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketSection {
    pub min_lower_margin: f64,
    pub min_upper_margin: f64,
    pub violations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coincidence_gap: Option<f64>,
    pub x_min_lower_margin: f64,
    pub x_min_upper_margin: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Counters {
    pub accepted_steps: u64,
    pub rejected_steps: u64,
    pub rhs_evals: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bisection_iterations: Option<u32>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Gates {
    pub first_integral: bool,
    pub ode: bool,
    pub bps_r1: bool,
    pub bps_r2: bool,
    pub el_r3: bool,
    pub el_r4: bool,
    pub energy_identity: bool,
    pub f12_agreement: bool,
    pub brackets: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center_slope: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_left: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_right: Option<bool>,
    /// Conjunction of every evaluated gate.
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TolSection {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub slope_tol: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub schema: String,
    pub command: String,
    pub bc: String,
    pub beta: f64,
    pub sign_branch: String,
    /// Wall anchor in `u` space: `u(0)`.
    pub anchor: f64,
    pub window: [f64; 2],
    pub spacing: f64,
    pub grid_points: usize,
    pub truncated: bool,
    pub tolerances: TolSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<f64>,
    pub residuals: Residuals,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSection>,
    pub brackets: BracketSection,
    pub flux_window: f64,
    pub far_field_energy_density: f64,
    pub counters: Counters,
    pub gates: Gates,
}

/// Slope diagnostics attached to a report when the run determined (or
/// reread) a critical slope.
#[derive(Debug, Clone, Copy)]
pub struct SlopeInfo {
    pub b_star: f64,
    pub oracle_slope: f64,
    pub agreement: f64,
    pub iterations: Option<u32>,
}

pub fn bc_name(bc: BoundaryCondition) -> &'static str {
    match bc {
        BoundaryCondition::HiggsToMagnetic => "higgs-magnetic",
        BoundaryCondition::MagneticToMagnetic => "magnetic-magnetic",
    }
}

pub fn parse_bc_name(name: &str) -> Result<BoundaryCondition> {
    match name {
        "higgs-magnetic" => Ok(BoundaryCondition::HiggsToMagnetic),
        "magnetic-magnetic" => Ok(BoundaryCondition::MagneticToMagnetic),
        other => anyhow::bail!("unknown bc '{other}' in sidecar"),
    }
}

fn branch_name(branch: SignBranch) -> &'static str {
    match branch {
        SignBranch::Upper => "upper",
        SignBranch::Lower => "lower",
    }
}

fn mirror_residual(profile: &WallProfile) -> (ResEntry, f64) {
    let n = profile.len();
    let mut worst = ResEntry {
        max: 0.0,
        at_x: 0.0,
    };
    for i in 0..n {
        let gap = (profile.u[i] - profile.u[n - 1 - i]).abs();
        if gap > worst.max {
            worst = ResEntry {
                max: gap,
                at_x: profile.grid[i],
            };
        }
    }
    (worst, profile.du[profile.center_index()])
}

/// Computes the full diagnostics for a profile whose fields have already
/// been reconstructed (or reread from a file). This is the single code
/// path behind solve, sweep, and verify.
pub fn diagnose(
    profile: &WallProfile,
    fields: &FieldProfile,
    command: &str,
    slope: Option<SlopeInfo>,
) -> Result<DiagnosticsReport> {
    let params = &profile.params;

    let (fi_max, fi_at) = first_integral_residual(profile)?;
    let (ode_max, ode_at) = ode_residual_on_grid(&profile.u, profile.spacing, params)?;
    let (r1, r2) = bps_residual(fields);
    let (r3, r4) = el_residual(fields);
    let energy = energy_identity(fields);
    let f12_agreement = fields.f12_agreement();

    let (symmetry, du_center) = match profile.bc {
        BoundaryCondition::MagneticToMagnetic => {
            let (m, duc) = mirror_residual(profile);
            (Some(m), Some(duc))
        }
        BoundaryCondition::HiggsToMagnetic => (None, None),
    };

    let tail = match fit_tails(profile) {
        Ok(fit) => Some(TailSection {
            lambda_left: fit.lambda_left,
            left_residual: fit.left_residual,
            c_right: fit.c_right,
            c_right_model: fit.c_right_model,
            predicted_c_right: 2.0 / (4.0 - params.beta).sqrt(),
            right_residual: fit.right_residual,
        }),
        Err(SolverError::InsufficientTail(_)) => None,
        Err(err) => return Err(err.into()),
    };

    let br = check_brackets(profile)?;

    let residuals = Residuals {
        first_integral: ResEntry {
            max: fi_max,
            at_x: profile.grid[fi_at],
        },
        ode: ResEntry {
            max: ode_max,
            at_x: profile.grid[ode_at],
        },
        bps_r1: ResEntry {
            max: r1.value,
            at_x: r1.at_x,
        },
        bps_r2: ResEntry {
            max: r2.value,
            at_x: r2.at_x,
        },
        el_r3: ResEntry {
            max: r3.value,
            at_x: r3.at_x,
        },
        el_r4: ResEntry {
            max: r4.value,
            at_x: r4.at_x,
        },
        energy_identity: ResEntry {
            max: energy.value,
            at_x: energy.at_x,
        },
        f12_agreement: ResEntry {
            max: f12_agreement.value,
            at_x: f12_agreement.at_x,
        },
        symmetry,
        du_center,
        column_f: None,
        column_a: None,
    };

    let gates = evaluate_gates(&residuals, &tail, br.violations, slope.as_ref());

    Ok(DiagnosticsReport {
        schema: "bpswall-diagnostics-v1".to_string(),
        command: command.to_string(),
        bc: bc_name(profile.bc).to_string(),
        beta: params.beta,
        sign_branch: branch_name(params.sign_branch).to_string(),
        anchor: profile.anchor,
        window: [profile.grid[0], *profile.grid.last().unwrap()],
        spacing: profile.spacing,
        grid_points: profile.len(),
        truncated: profile.truncated,
        tolerances: TolSection {
            abs_tol: params.tol.abs_tol,
            rel_tol: params.tol.rel_tol,
            slope_tol: params.tol.slope_tol,
        },
        b_star: slope.map(|s| s.b_star),
        oracle_slope: slope.map(|s| s.oracle_slope),
        agreement: slope.map(|s| s.agreement),
        residuals,
        tail,
        brackets: BracketSection {
            min_lower_margin: br.min_lower_margin,
            min_upper_margin: br.min_upper_margin,
            violations: br.violations,
            coincidence_gap: br.coincidence_gap,
            x_min_lower_margin: br.x_min_lower_margin,
            x_min_upper_margin: br.x_min_upper_margin,
        },
        flux_window: fields.flux_window,
        far_field_energy_density: far_field_energy_density(params),
        counters: Counters {
            accepted_steps: profile.stats.accepted,
            rejected_steps: profile.stats.rejected,
            rhs_evals: profile.stats.rhs_evals,
            bisection_iterations: slope.and_then(|s| s.iterations),
        },
        gates,
    })
}

fn evaluate_gates(
    res: &Residuals,
    tail: &Option<TailSection>,
    bracket_violations: usize,
    slope: Option<&SlopeInfo>,
) -> Gates {
    let first_integral = res.first_integral.max <= GATE_FIRST_INTEGRAL;
    let ode = res.ode.max <= GATE_ODE;
    let bps_r1 = res.bps_r1.max <= GATE_BPS;
    let bps_r2 = res.bps_r2.max <= GATE_BPS;
    let el_r3 = res.el_r3.max <= GATE_EL;
    let el_r4 = res.el_r4.max <= GATE_EL;
    let energy = res.energy_identity.max <= GATE_ENERGY;
    let f12 = res.f12_agreement.max <= GATE_BPS;
    let brackets = bracket_violations == 0;
    let oracle_agreement = slope.map(|s| s.agreement <= GATE_AGREEMENT);
    let symmetry = res.symmetry.as_ref().map(|m| m.max <= GATE_SYMMETRY);
    let center_slope = res.du_center.map(|d| d.abs() <= GATE_CENTER_SLOPE);
    let lambda_left = tail
        .as_ref()
        .and_then(|t| t.lambda_left)
        .map(|l| (l - 1.0).abs() <= GATE_LAMBDA);
    let c_right = tail
        .as_ref()
        .map(|t| (t.c_right - t.predicted_c_right).abs() <= GATE_C_RIGHT);
    let mut pass =
        first_integral && ode && bps_r1 && bps_r2 && el_r3 && el_r4 && energy && f12 && brackets;
    for ok in [
        oracle_agreement,
        symmetry,
        center_slope,
        lambda_left,
        c_right,
    ]
    .into_iter()
    .flatten()
    {
        pass = pass && ok;
    }
    if let Some(cf) = res.column_f {
        pass = pass && cf <= 1e-12;
    }
    if let Some(ca) = res.column_a {
        pass = pass && ca <= 1e-12;
    }
    Gates {
        first_integral,
        ode,
        bps_r1,
        bps_r2,
        el_r3,
        el_r4,
        energy_identity: energy,
        f12_agreement: f12,
        brackets,
        oracle_agreement,
        symmetry,
        center_slope,
        lambda_left,
        c_right,
        pass,
    }
}

/// Reevaluates the gate block after residual fields were amended (used by
/// verify to fold the column-consistency checks in).
pub fn refresh_gates(report: &mut DiagnosticsReport, slope: Option<&SlopeInfo>) {
    report.gates = evaluate_gates(
        &report.residuals,
        &report.tail,
        report.brackets.violations,
        slope,
    );
}

/// One human-readable line per gate, for stderr.
pub fn gate_summary(report: &DiagnosticsReport) -> String {
    let mut lines = Vec::new();
    let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
    let g = &report.gates;
    let r = &report.residuals;
    lines.push(format!(
        "first_integral   {}  max {:.3e} at x = {:.3}",
        mark(g.first_integral),
        r.first_integral.max,
        r.first_integral.at_x
    ));
    lines.push(format!(
        "ode              {}  max {:.3e} at x = {:.3}",
        mark(g.ode),
        r.ode.max,
        r.ode.at_x
    ));
    lines.push(format!(
        "bps_r1           {}  max {:.3e} at x = {:.3}",
        mark(g.bps_r1),
        r.bps_r1.max,
        r.bps_r1.at_x
    ));
    lines.push(format!(
        "bps_r2           {}  max {:.3e} at x = {:.3}",
        mark(g.bps_r2),
        r.bps_r2.max,
        r.bps_r2.at_x
    ));
    lines.push(format!(
        "el_r3            {}  max {:.3e} at x = {:.3}",
        mark(g.el_r3),
        r.el_r3.max,
        r.el_r3.at_x
    ));
    lines.push(format!(
        "el_r4            {}  max {:.3e} at x = {:.3}",
        mark(g.el_r4),
        r.el_r4.max,
        r.el_r4.at_x
    ));
    lines.push(format!(
        "energy_identity  {}  max {:.3e} at x = {:.3}",
        mark(g.energy_identity),
        r.energy_identity.max,
        r.energy_identity.at_x
    ));
    lines.push(format!(
        "f12_agreement    {}  max {:.3e} at x = {:.3}",
        mark(g.f12_agreement),
        r.f12_agreement.max,
        r.f12_agreement.at_x
    ));
    lines.push(format!(
        "brackets         {}  {} violations",
        mark(g.brackets),
        report.brackets.violations
    ));
    if let (Some(ok), Some(agreement)) = (g.oracle_agreement, report.agreement) {
        lines.push(format!("oracle_agreement {}  {:.3e}", mark(ok), agreement));
    }
    if let (Some(ok), Some(sym)) = (g.symmetry, &r.symmetry) {
        lines.push(format!(
            "symmetry         {}  max {:.3e}",
            mark(ok),
            sym.max
        ));
    }
    if let (Some(ok), Some(duc)) = (g.center_slope, r.du_center) {
        lines.push(format!(
            "center_slope     {}  |u'(0)| = {:.3e}",
            mark(ok),
            duc.abs()
        ));
    }
    if let Some(tail) = &report.tail {
        if let (Some(ok), Some(lambda)) = (g.lambda_left, tail.lambda_left) {
            lines.push(format!("lambda_left      {}  {:.4}", mark(ok), lambda));
        }
        if let Some(ok) = g.c_right {
            lines.push(format!(
                "c_right          {}  {:.6} vs {:.6}",
                mark(ok),
                tail.c_right,
                tail.predicted_c_right
            ));
        }
    } else {
        lines.push("tail             skipped (window too shallow for the fit)".to_string());
    }
    lines.push(format!("overall          {}", mark(g.pass)));
    lines.join("\n")
}
