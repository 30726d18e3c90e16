//! `ptsym`: spectra, phase diagrams and time-domain runs for N-channel PT
//! coupled-mode systems.
//!
//! Exit codes: 0 ok, 2 usage or configuration error, 3 verification
//! failure, 4 numerical failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "ptsym",
    version,
    about = "N-channel PT-symmetric coupled-mode spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form spectrum, optionally checked against the numeric eigensolver.
    Spectrum(SpectrumArgs),
    /// Phase of the non-degenerate pair over an (N, gamma) grid, plus the boundary curve.
    PhaseDiagram(PhaseDiagramArgs),
    /// RK4 integration of the coupled-mode equations with a growth-rate fit.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ConfigArgs {
    /// JSON config file: {"n": 4, "omega": 0, "kappa": 1, "gamma": 1, "pattern": "alternating"}
    #[arg(long, value_name = "FILE", conflicts_with_all = ["n", "omega", "kappa", "gamma", "pattern"])]
    pub config: Option<PathBuf>,
    /// Number of channels (even, at least 2).
    #[arg(long, required_unless_present = "config")]
    pub n: Option<usize>,
    /// Common angular frequency.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Coupling constant.
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    /// Loss/gain magnitude (non-negative).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Diagonal sign arrangement: alternating or blocked.
    #[arg(long)]
    pub pattern: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Compare with the numeric eigensolver.
    #[arg(long)]
    pub verify: bool,
    /// Largest allowed analytic-vs-numeric deviation for --verify.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Seed for the residual check's random start vector.
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DataFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct PhaseDiagramArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: usize,
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub gamma_max: f64,
    #[arg(long, default_value_t = 101)]
    pub gamma_steps: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub kappa: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: DataFormat,
    /// Evaluate cells on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Integration end time.
    #[arg(long)]
    pub t_end: f64,
    /// Step size; defaults to 0.01 / max(|omega| + gamma + N|kappa|, 1).
    #[arg(long)]
    pub dt: Option<f64>,
    /// Initial amplitudes as comma-separated re:im pairs.
    #[arg(long, allow_hyphen_values = true)]
    pub initial: Option<String>,
    /// Keep every k-th step in the trajectory.
    #[arg(long)]
    pub record_stride: Option<usize>,
    /// Trailing fraction of the trajectory used for the growth-rate fit.
    #[arg(long, default_value_t = 0.5)]
    pub fit_window: f64,
    /// Trajectory CSV destination; stdout when absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum(args) => commands::spectrum(&args),
        Command::PhaseDiagram(args) => commands::phase_diagram(&args),
        Command::Simulate(args) => commands::simulate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
