//! The solve command: one profile, CSV + JSON emission, gate verdict.

use std::path::Path;

use anyhow::{Context, Result};
use bpswall_core::{
    reconstruct, solve_higgs_to_magnetic, solve_magnetic_to_magnetic, BoundaryCondition,
    WallProfile,
};

use crate::config::RunConfig;
use crate::report::{self, DiagnosticsReport, SlopeInfo};
use crate::{csvio, EXIT_GATE_FAILURE};

/// Solves one (beta, anchor) combination and writes `STEM.csv`,
/// `STEM.json`, and optionally the plot files. Returns the report.
pub fn solve_one(
    cfg: &RunConfig,
    beta: f64,
    anchor: f64,
    stem: &Path,
) -> Result<DiagnosticsReport> {
    let params = cfg.params(beta);
    let profile: WallProfile = match cfg.bc {
        BoundaryCondition::HiggsToMagnetic => solve_higgs_to_magnetic(anchor, &params, cfg.window)?,
        BoundaryCondition::MagneticToMagnetic => {
            solve_magnetic_to_magnetic(anchor, &params, cfg.half_window)?
        }
    };
    let fields = reconstruct(&profile)?;
    let slope = profile.shooting.as_ref().map(|s| SlopeInfo {
        b_star: s.b_star,
        oracle_slope: s.oracle_slope,
        agreement: s.agreement,
        iterations: Some(s.iterations),
    });
    let report = report::diagnose(&profile, &fields, "solve", slope)?;

    let csv_path = csvio::stem_with(stem, "csv");
    csvio::write_profile(&csv_path, &profile, &fields)?;
    let json_path = csvio::stem_with(stem, "json");
    let mut json = serde_json::to_string_pretty(&report).context("serializing report")?;
    json.push('\n');
    std::fs::write(&json_path, json)
        .with_context(|| format!("cannot write {}", json_path.display()))?;
    if cfg.emit_plot_data {
        csvio::write_plot_data(stem, &profile, &fields)?;
    }
    Ok(report)
}

pub fn run(cfg: RunConfig) -> Result<u8> {
    let (beta, anchor) = cfg.single()?;
    let started = std::time::Instant::now();
    let report = solve_one(&cfg, beta, anchor, &cfg.output)?;
    eprintln!(
        "solved {} beta={} anchor={} ({} grid points, {:.2?})",
        report.bc,
        report.beta,
        report.anchor,
        report.grid_points,
        started.elapsed()
    );
    eprintln!("{}", report::gate_summary(&report));
    eprintln!(
        "wrote {} and {}",
        csvio::stem_with(&cfg.output, "csv").display(),
        csvio::stem_with(&cfg.output, "json").display()
    );
    Ok(if report.gates.pass {
        0
    } else {
        EXIT_GATE_FAILURE
    })
}
