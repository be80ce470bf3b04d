//! Command-line front end for the domain-wall solver: solve single
//! profiles, sweep parameter grids, verify emitted files, and query the
//! critical slope.

mod commands;
mod config;
mod csvio;
mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// Exit code when a residual gate fails while the run itself succeeded.
pub const EXIT_GATE_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "bpswall",
    version,
    about = "Born-Infeld Abelian Higgs domain-wall solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CommonArgs {
    /// Flat key=value config file; command-line flags override it.
    #[arg(long)]
    config: Option<std::path::PathBuf>,

    /// Born parameter(s) beta in [0, 4); comma-separated list for sweep.
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,

    /// Boundary condition: higgs-magnetic or magnetic-magnetic.
    #[arg(long)]
    bc: Option<String>,

    /// Anchor depth(s) a > 0 for the Higgs-to-magnetic wall (u(0) = -a).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    a: Option<Vec<f64>>,

    /// Center value(s) u0 < 0 for the magnetic-to-magnetic wall.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    u0: Option<Vec<f64>>,

    /// Sign branch of the first-order system: upper or lower.
    #[arg(long)]
    branch: Option<String>,

    /// Left end of the solve window (higgs-magnetic).
    #[arg(long, allow_negative_numbers = true)]
    x_min: Option<f64>,

    /// Right end of the solve window (higgs-magnetic).
    #[arg(long, allow_negative_numbers = true)]
    x_max: Option<f64>,

    /// Half-width of the symmetric window (magnetic-magnetic).
    #[arg(long)]
    half_window: Option<f64>,

    /// Absolute integration tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,

    /// Relative integration tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,

    /// Bisection width target for the critical slope.
    #[arg(long)]
    slope_tol: Option<f64>,

    /// Output stem (solve: STEM.csv + STEM.json) or directory (sweep).
    #[arg(short, long)]
    output: Option<std::path::PathBuf>,

    /// Also write two-column x/u, x/F12, x/H plot data files.
    #[arg(long)]
    emit_plot_data: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one wall profile and emit CSV + JSON diagnostics.
    Solve(CommonArgs),
    /// Solve a grid of (beta, anchor) combinations concurrently.
    Sweep(CommonArgs),
    /// Recompute every residual from an emitted CSV and its JSON sidecar.
    Verify {
        /// Path to a profile CSV written by solve.
        path: std::path::PathBuf,
    },
    /// Print the critical slope, its quadrature oracle, and their agreement.
    Slope(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(args) => config::resolve(&args).and_then(commands::solve::run),
        Command::Sweep(args) => config::resolve(&args).and_then(commands::sweep::run),
        Command::Verify { path } => commands::verify::run(&path),
        Command::Slope(args) => config::resolve(&args).and_then(commands::slope::run),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
