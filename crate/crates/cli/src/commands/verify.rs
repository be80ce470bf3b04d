//! The verify command: rebuilds every residual and bracket check from an
//! emitted CSV plus the beta/bc metadata in its JSON sidecar, through the
//! same code paths the solver used, and prints a fresh report.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use bpswall_core::{
    critical_slope_oracle, BoundaryCondition, FieldProfile, ModelParams, StepStats, Tolerances,
    WallProfile,
};

use crate::report::{self, SlopeInfo, TolSection};
use crate::{csvio, EXIT_GATE_FAILURE};

/// The subset of the sidecar needed to rebuild model parameters.
#[derive(Deserialize)]
struct SidecarMeta {
    bc: String,
    beta: f64,
    sign_branch: String,
    anchor: f64,
    truncated: bool,
    tolerances: TolSection,
}

fn parse_branch(name: &str) -> Result<bpswall_core::SignBranch> {
    match name {
        "upper" => Ok(bpswall_core::SignBranch::Upper),
        "lower" => Ok(bpswall_core::SignBranch::Lower),
        other => bail!("unknown sign_branch '{other}' in sidecar"),
    }
}

pub fn run(path: &Path) -> Result<u8> {
    let table = csvio::read_profile(path)?;
    let sidecar_path = path.with_extension("json");
    let sidecar_text = std::fs::read_to_string(&sidecar_path)
        .with_context(|| format!("cannot read sidecar {}", sidecar_path.display()))?;
    let meta: SidecarMeta = serde_json::from_str(&sidecar_text)
        .with_context(|| format!("cannot parse sidecar {}", sidecar_path.display()))?;

    let bc = report::parse_bc_name(&meta.bc)?;
    let params = ModelParams {
        beta: meta.beta,
        sign_branch: parse_branch(&meta.sign_branch)?,
        tol: Tolerances {
            abs_tol: meta.tolerances.abs_tol,
            rel_tol: meta.tolerances.rel_tol,
            slope_tol: meta.tolerances.slope_tol,
        },
    };

    let fields = FieldProfile::from_arrays(
        table.x.clone(),
        table.f.clone(),
        table.a.clone(),
        table.f12.clone(),
        table.h.clone(),
        &params,
    )?;
    let profile = WallProfile {
        bc,
        params,
        anchor: meta.anchor,
        b_star: None,
        shooting: None,
        grid: table.x.clone(),
        u: table.u.clone(),
        du: table.du.clone(),
        spacing: fields.spacing,
        truncated: meta.truncated,
        stats: StepStats::default(),
    };

    let slope = match bc {
        BoundaryCondition::HiggsToMagnetic => {
            let a = -meta.anchor;
            let b_star = -profile.du[profile.center_index()];
            let oracle = critical_slope_oracle(a, &params)?;
            let agreement = (b_star - oracle).abs() / oracle;
            Some(SlopeInfo {
                b_star,
                oracle_slope: oracle,
                agreement,
                iterations: None,
            })
        }
        BoundaryCondition::MagneticToMagnetic => None,
    };

    let mut report = report::diagnose(&profile, &fields, "verify", slope)?;

    let s = params.sign_branch.signum();
    let mut column_f = 0.0_f64;
    let mut column_a = 0.0_f64;
    for i in 0..profile.len() {
        column_f = column_f.max((table.f[i] - (0.5 * table.u[i]).exp()).abs());
        column_a = column_a.max((table.a[i] + s * table.du[i] / 2.0).abs());
    }
    report.residuals.column_f = Some(column_f);
    report.residuals.column_a = Some(column_a);
    report::refresh_gates(&mut report, slope.as_ref());

    let json = serde_json::to_string_pretty(&report).context("serializing report")?;
    println!("{json}");
    eprintln!("{}", report::gate_summary(&report));
    Ok(if report.gates.pass {
        0
    } else {
        EXIT_GATE_FAILURE
    })
}
