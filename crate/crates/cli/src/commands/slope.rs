//! The slope command: critical slope, quadrature oracle, and their
//! agreement on one machine-parsable line.

use anyhow::{bail, Result};
use bpswall_core::{find_critical_slope, BoundaryCondition};

use crate::config::RunConfig;

pub fn run(cfg: RunConfig) -> Result<u8> {
    if cfg.bc != BoundaryCondition::HiggsToMagnetic {
        bail!("slope applies to the higgs-magnetic condition (anchor a > 0)");
    }
    let (beta, a) = cfg.single()?;
    let params = cfg.params(beta);
    let outcome = find_critical_slope(a, &params)?;
    println!(
        "beta={beta} a={a} b_star={:.16e} oracle={:.16e} agreement={:.6e} bracket_lo={:.16e} bracket_hi={:.16e} iterations={}",
        outcome.b_star,
        outcome.oracle_slope,
        outcome.agreement,
        outcome.bracket.0,
        outcome.bracket.1,
        outcome.iterations
    );
    Ok(0)
}
