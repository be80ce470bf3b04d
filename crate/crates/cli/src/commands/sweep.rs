//! The sweep command: a grid of (beta, anchor) combinations solved in a
//! work pool, one report per combination plus a summary CSV.

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use rayon::prelude::*;

use crate::commands::solve::solve_one;
use crate::config::RunConfig;
use crate::report::DiagnosticsReport;
use crate::EXIT_GATE_FAILURE;

pub const SUMMARY_HEADER: &str =
    "beta,anchor,b_star,oracle_slope,agreement,lambda_left,c_right,predicted_c_right,max_residual,status";

fn opt_num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.16e}")).unwrap_or_default()
}

fn max_residual(report: &DiagnosticsReport) -> f64 {
    let r = &report.residuals;
    [
        r.first_integral.max,
        r.ode.max,
        r.bps_r1.max,
        r.bps_r2.max,
        r.el_r3.max,
        r.el_r4.max,
        r.energy_identity.max,
        r.f12_agreement.max,
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn combo_stem(dir: &std::path::Path, beta: f64, anchor: f64) -> PathBuf {
    dir.join(format!("beta{beta}_anchor{anchor}"))
}

pub fn run(cfg: RunConfig) -> Result<u8> {
    let mut combos: Vec<(f64, f64)> = Vec::new();
    let mut duplicates = 0usize;
    for &beta in &cfg.betas {
        for &anchor in &cfg.anchors {
            if combos
                .iter()
                .any(|&(b, a)| b.to_bits() == beta.to_bits() && a.to_bits() == anchor.to_bits())
            {
                duplicates += 1;
            } else {
                combos.push((beta, anchor));
            }
        }
    }
    if duplicates > 0 {
        eprintln!("warning: {duplicates} duplicate (beta, anchor) combination(s) dropped");
    }
    combos.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));

    std::fs::create_dir_all(&cfg.output)
        .with_context(|| format!("cannot create {}", cfg.output.display()))?;

    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Ok(text) = std::env::var("BPSWALL_THREADS") {
            let threads: usize = text
                .parse()
                .with_context(|| format!("BPSWALL_THREADS: bad thread count '{text}'"))?;
            builder = builder.num_threads(threads.max(1));
        }
        builder.build().context("building sweep thread pool")?
    };

    let started = std::time::Instant::now();
    let results: Vec<(f64, f64, Result<DiagnosticsReport>)> = pool.install(|| {
        combos
            .par_iter()
            .map(|&(beta, anchor)| {
                let stem = combo_stem(&cfg.output, beta, anchor);
                (beta, anchor, solve_one(&cfg, beta, anchor, &stem))
            })
            .collect()
    });

    let mut summary = Vec::new();
    writeln!(summary, "{SUMMARY_HEADER}")?;
    let mut any_error = false;
    let mut any_gate_failure = false;
    for (beta, anchor, outcome) in &results {
        match outcome {
            Ok(report) => {
                let status = if report.gates.pass {
                    "ok"
                } else {
                    any_gate_failure = true;
                    "gate-failure"
                };
                writeln!(
                    summary,
                    "{beta},{anchor},{},{},{},{},{},{},{:.3e},{status}",
                    opt_num(report.b_star),
                    opt_num(report.oracle_slope),
                    opt_num(report.agreement),
                    opt_num(report.tail.as_ref().and_then(|t| t.lambda_left)),
                    opt_num(report.tail.as_ref().map(|t| t.c_right)),
                    opt_num(report.tail.as_ref().map(|t| t.predicted_c_right)),
                    max_residual(report),
                )?;
                eprintln!(
                    "beta={beta} anchor={anchor}: {status} (max residual {:.3e})",
                    max_residual(report)
                );
            }
            Err(err) => {
                any_error = true;
                let message = format!("{err:#}").replace(',', ";").replace('\n', " ");
                writeln!(summary, "{beta},{anchor},,,,,,,,error: {message}")?;
                eprintln!("beta={beta} anchor={anchor}: error: {err:#}");
            }
        }
    }
    let summary_path = cfg.output.join("summary.csv");
    std::fs::write(&summary_path, summary)
        .with_context(|| format!("cannot write {}", summary_path.display()))?;
    eprintln!(
        "swept {} combination(s) in {:.2?}; summary at {}",
        results.len(),
        started.elapsed(),
        summary_path.display()
    );

    Ok(if any_error {
        1
    } else if any_gate_failure {
        EXIT_GATE_FAILURE
    } else {
        0
    })
}
