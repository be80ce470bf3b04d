//! Run configuration assembled from built-in defaults, an optional flat
//! key=value config file, and command-line flags, in increasing order of
//! precedence.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bpswall_core::{BoundaryCondition, ModelParams, SignBranch, Tolerances};

use crate::CommonArgs;

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub bc: BoundaryCondition,
    pub betas: Vec<f64>,
    /// Anchor values: `a > 0` for Higgs-to-magnetic, `u0 < 0` for
    /// magnetic-to-magnetic.
    pub anchors: Vec<f64>,
    pub branch: SignBranch,
    pub window: (f64, f64),
    pub half_window: f64,
    pub tol: Tolerances,
    pub output: PathBuf,
    pub emit_plot_data: bool,
}

impl RunConfig {
    /// Model parameters for one beta of this run.
    pub fn params(&self, beta: f64) -> ModelParams {
        ModelParams {
            beta,
            sign_branch: self.branch,
            tol: self.tol,
        }
    }

    /// The single (beta, anchor) pair, for commands that take exactly one.
    pub fn single(&self) -> Result<(f64, f64)> {
        if self.betas.len() != 1 || self.anchors.len() != 1 {
            bail!(
                "this command takes exactly one beta and one anchor (got {} betas, {} anchors); use sweep for lists",
                self.betas.len(),
                self.anchors.len()
            );
        }
        Ok((self.betas[0], self.anchors[0]))
    }
}

fn parse_bc(text: &str) -> Result<BoundaryCondition> {
    match text {
        "higgs-magnetic" => Ok(BoundaryCondition::HiggsToMagnetic),
        "magnetic-magnetic" => Ok(BoundaryCondition::MagneticToMagnetic),
        other => bail!("unknown bc '{other}' (expected higgs-magnetic or magnetic-magnetic)"),
    }
}

fn parse_branch(text: &str) -> Result<SignBranch> {
    match text {
        "upper" => Ok(SignBranch::Upper),
        "lower" => Ok(SignBranch::Lower),
        other => bail!("unknown branch '{other}' (expected upper or lower)"),
    }
}

fn parse_list(text: &str, key: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .with_context(|| format!("config key '{key}': bad number '{}'", part.trim()))
        })
        .collect()
}

/// Parses the flat key=value config file. Blank lines and lines starting
/// with `#` are skipped; unknown keys are errors so typos stay visible.
fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut map = BTreeMap::new();
    const KNOWN: &[&str] = &[
        "bc",
        "beta",
        "a",
        "u0",
        "branch",
        "x_min",
        "x_max",
        "half_window",
        "abs_tol",
        "rel_tol",
        "slope_tol",
        "output",
        "emit_plot_data",
    ];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            bail!(
                "{}:{}: expected key = value, got '{line}'",
                path.display(),
                lineno + 1
            );
        };
        let key = key.trim().to_string();
        if !KNOWN.contains(&key.as_str()) {
            bail!(
                "{}:{}: unknown config key '{key}'",
                path.display(),
                lineno + 1
            );
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

fn get_f64(file: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    file.get(key)
        .map(|v| {
            v.parse::<f64>()
                .with_context(|| format!("config key '{key}': bad number '{v}'"))
        })
        .transpose()
}

/// Merges defaults, the config file, and command-line flags into a
/// validated run configuration.
pub fn resolve(args: &CommonArgs) -> Result<RunConfig> {
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };

    let bc_text = args
        .bc
        .clone()
        .or_else(|| file.get("bc").cloned())
        .unwrap_or_else(|| "higgs-magnetic".to_string());
    let bc = parse_bc(&bc_text)?;

    let branch_text = args
        .branch
        .clone()
        .or_else(|| file.get("branch").cloned())
        .unwrap_or_else(|| "upper".to_string());
    let branch = parse_branch(&branch_text)?;

    let betas = match (&args.beta, file.get("beta")) {
        (Some(list), _) => list.clone(),
        (None, Some(text)) => parse_list(text, "beta")?,
        (None, None) => bail!("beta is required (flag --beta or config key 'beta')"),
    };
    if betas.is_empty() {
        bail!("beta list must not be empty");
    }

    let file_a = file.get("a").map(|t| parse_list(t, "a")).transpose()?;
    let file_u0 = file.get("u0").map(|t| parse_list(t, "u0")).transpose()?;
    let anchors = match bc {
        BoundaryCondition::HiggsToMagnetic => {
            args.a.clone().or(file_a).unwrap_or_else(|| vec![1.0])
        }
        BoundaryCondition::MagneticToMagnetic => {
            args.u0.clone().or(file_u0).unwrap_or_else(|| vec![-1.0])
        }
    };
    if anchors.is_empty() {
        bail!("anchor list must not be empty");
    }

    let defaults = Tolerances::default();
    let tol = Tolerances {
        abs_tol: args
            .abs_tol
            .or(get_f64(&file, "abs_tol")?)
            .unwrap_or(defaults.abs_tol),
        rel_tol: args
            .rel_tol
            .or(get_f64(&file, "rel_tol")?)
            .unwrap_or(defaults.rel_tol),
        slope_tol: args
            .slope_tol
            .or(get_f64(&file, "slope_tol")?)
            .unwrap_or(defaults.slope_tol),
    };

    let window = (
        args.x_min
            .or(get_f64(&file, "x_min")?)
            .unwrap_or(bpswall_core::profile::DEFAULT_WINDOW.0),
        args.x_max
            .or(get_f64(&file, "x_max")?)
            .unwrap_or(bpswall_core::profile::DEFAULT_WINDOW.1),
    );
    let half_window = args
        .half_window
        .or(get_f64(&file, "half_window")?)
        .unwrap_or(bpswall_core::profile::DEFAULT_HALF_WINDOW);

    let output = args
        .output
        .clone()
        .or_else(|| file.get("output").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("wall"));

    let emit_plot_data = args.emit_plot_data
        || file
            .get("emit_plot_data")
            .map(|v| v == "true" || v == "1")
            .unwrap_or(false);

    Ok(RunConfig {
        bc,
        betas,
        anchors,
        branch,
        window,
        half_window,
        tol,
        output,
        emit_plot_data,
    })
}
