use std::fmt;
use std::fs;
use std::io;

use num_complex::Complex64;
use serde_json::{json, Value};

use ptsym::analytic::{breaking_threshold, spectrum_n_channel};
use ptsym::dynamics::{default_dt, default_initial, evolve, growth_rate, ModeState};
use ptsym::eigensolver::SolverSettings;
use ptsym::fmt::{round_sig15, sig15};
use ptsym::phasemap::{
    boundary_curve, cell_json, phase_grid_with, write_boundary_csv, write_grid_csv, GridSpec,
};
use ptsym::validate::compare;
use ptsym::{Execution, Pattern, PtError, Spectrum, SystemConfig};

use crate::output::emit;
use crate::{ConfigArgs, DataFormat, Format, PhaseDiagramArgs, SimulateArgs, SpectrumArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification { max_abs_diff: f64, tol: f64 },
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verification { .. } => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Numerical(msg) => f.write_str(msg),
            CliError::Verification { max_abs_diff, tol } => write!(
                f,
                "verification failed: max_abs_diff {} exceeds tol {}",
                sig15(*max_abs_diff),
                sig15(*tol)
            ),
        }
    }
}

impl From<PtError> for CliError {
    fn from(err: PtError) -> Self {
        match err {
            PtError::NoConvergence { .. } | PtError::DegenerateFit(_) => {
                CliError::Numerical(err.to_string())
            }
            PtError::Unstable { .. } => CliError::Numerical(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Usage(format!("i/o error: {err}"))
    }
}

type CliResult<T> = Result<T, CliError>;

fn load_config(args: &ConfigArgs) -> CliResult<SystemConfig> {
    if let Some(path) = &args.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(SystemConfig::from_json(&text)?);
    }
    let n = args
        .n
        .ok_or_else(|| CliError::Usage("either --config or --n is required".into()))?;
    let pattern: Pattern = match &args.pattern {
        Some(p) => p.parse()?,
        None => Pattern::default(),
    };
    Ok(SystemConfig::with_pattern(
        n,
        args.omega.unwrap_or(0.0),
        args.kappa.unwrap_or(1.0),
        args.gamma.unwrap_or(0.0),
        pattern,
    )?)
}

/// Result of the `spectrum` subcommand.
struct RunReport {
    config: SystemConfig,
    analytic: Spectrum,
    threshold: f64,
    numeric: Option<Spectrum>,
    max_abs_diff: Option<f64>,
    max_residual: Option<f64>,
}

fn spectrum_rows(s: &Spectrum) -> Vec<Value> {
    s.eigenvalues()
        .iter()
        .map(|e| {
            json!({
                "re": round_sig15(e.value.re),
                "im": round_sig15(e.value.im),
                "multiplicity": e.multiplicity,
                "phase": e.phase,
            })
        })
        .collect()
}

fn config_json(c: &SystemConfig) -> Value {
    json!({
        "n": c.n,
        "omega": round_sig15(c.omega),
        "kappa": round_sig15(c.kappa),
        "gamma": round_sig15(c.gamma),
        "pattern": c.pattern,
    })
}

fn config_line(c: &SystemConfig) -> String {
    format!(
        "n={} omega={} kappa={} gamma={} pattern={}",
        c.n,
        sig15(c.omega),
        sig15(c.kappa),
        sig15(c.gamma),
        c.pattern
    )
}

impl RunReport {
    fn to_json(&self, tol: Option<f64>) -> String {
        let mut obj = json!({
            "config": config_json(&self.config),
            "gamma_star": round_sig15(self.threshold),
            "analytic": spectrum_rows(&self.analytic),
        });
        if let Some(numeric) = &self.numeric {
            obj["numeric"] = Value::Array(spectrum_rows(numeric));
        }
        if let Some(d) = self.max_abs_diff {
            obj["max_abs_diff"] = json!(round_sig15(d));
        }
        if let Some(r) = self.max_residual {
            obj["max_residual"] = json!(round_sig15(r));
        }
        if let Some(t) = tol {
            obj["tol"] = json!(round_sig15(t));
        }
        let mut text = serde_json::to_string_pretty(&obj).expect("report serialises");
        text.push('\n');
        text
    }

    fn to_csv(&self, tol: Option<f64>) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# {}\n",
            config_line(&self.config).replace(' ', ",")
        ));
        out.push_str(&format!("# gamma_star={}\n", sig15(self.threshold)));
        out.push_str("source,re,im,multiplicity,phase\n");
        let mut rows = |source: &str, s: &Spectrum| {
            for e in s.eigenvalues() {
                out.push_str(&format!(
                    "{source},{},{},{},{}\n",
                    sig15(e.value.re),
                    sig15(e.value.im),
                    e.multiplicity,
                    e.phase
                ));
            }
        };
        rows("analytic", &self.analytic);
        if let Some(numeric) = &self.numeric {
            rows("numeric", numeric);
        }
        if let Some(d) = self.max_abs_diff {
            out.push_str(&format!("# max_abs_diff={}\n", sig15(d)));
        }
        if let Some(r) = self.max_residual {
            out.push_str(&format!("# max_residual={}\n", sig15(r)));
        }
        if let Some(t) = tol {
            out.push_str(&format!("# tol={}\n", sig15(t)));
        }
        out
    }

    fn to_text(&self, tol: Option<f64>) -> String {
        let table = |s: &Spectrum| {
            let mut t = format!("{:>22} {:>22} {:>6}  {}\n", "re", "im", "mult", "phase");
            for e in s.eigenvalues() {
                t.push_str(&format!(
                    "{:>22} {:>22} {:>6}  {}\n",
                    sig15(e.value.re),
                    sig15(e.value.im),
                    e.multiplicity,
                    e.phase
                ));
            }
            t
        };
        let mut out = format!(
            "config: {}\n\nanalytic spectrum\n",
            config_line(&self.config)
        );
        out.push_str(&table(&self.analytic));
        out.push_str(&format!("\ngamma_star: {}\n", sig15(self.threshold)));
        if let Some(numeric) = &self.numeric {
            out.push_str("\nnumeric spectrum (clustered)\n");
            out.push_str(&table(numeric));
        }
        if let Some(d) = self.max_abs_diff {
            out.push_str(&format!("\nmax_abs_diff: {}\n", sig15(d)));
        }
        if let Some(r) = self.max_residual {
            out.push_str(&format!("max_residual: {}\n", sig15(r)));
        }
        if let (Some(d), Some(t)) = (self.max_abs_diff, tol) {
            let verdict = if d <= t { "passed" } else { "FAILED" };
            out.push_str(&format!("verification: {verdict} (tol {})\n", sig15(t)));
        }
        out
    }
}

pub fn spectrum(args: &SpectrumArgs) -> CliResult<()> {
    let config = load_config(&args.config)?;
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    let analytic = spectrum_n_channel(&config)?;
    let threshold = breaking_threshold(config.n, config.kappa)?;
    let mut report = RunReport {
        config,
        analytic,
        threshold,
        numeric: None,
        max_abs_diff: None,
        max_residual: None,
    };
    if args.verify {
        let cmp = compare(&config, &SolverSettings::default(), args.seed)?;
        report.numeric = Some(cmp.numeric);
        report.max_abs_diff = Some(cmp.max_abs_diff);
        report.max_residual = Some(cmp.max_residual);
    }
    let tol = args.verify.then_some(args.tol);
    let text = match args.format {
        Format::Text => report.to_text(tol),
        Format::Json => report.to_json(tol),
        Format::Csv => report.to_csv(tol),
    };
    emit(args.out.as_deref(), text.as_bytes())?;
    match report.max_abs_diff {
        Some(d) if d.is_nan() || d > args.tol => Err(CliError::Verification {
            max_abs_diff: d,
            tol: args.tol,
        }),
        _ => Ok(()),
    }
}

pub fn phase_diagram(args: &PhaseDiagramArgs) -> CliResult<()> {
    let spec = GridSpec {
        n_min: args.n_min,
        n_max: args.n_max,
        gamma_min: args.gamma_min,
        gamma_max: args.gamma_max,
        gamma_steps: args.gamma_steps,
        kappa: args.kappa,
    };
    let exec = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let cells = phase_grid_with(&spec, exec)?;
    let curve = boundary_curve(spec.n_min, spec.n_max, spec.kappa)?;
    let bytes = match args.format {
        DataFormat::Csv => {
            let mut buf = Vec::new();
            write_grid_csv(&cells, &mut buf)?;
            buf.push(b'\n');
            write_boundary_csv(&curve, &mut buf)?;
            buf
        }
        DataFormat::Json => {
            let obj = json!({
                "cells": cells.iter().map(cell_json).collect::<Vec<_>>(),
                "boundary": curve
                    .iter()
                    .map(|(n, g)| json!({"n": n, "gamma_star": round_sig15(*g)}))
                    .collect::<Vec<_>>(),
            });
            let mut text = serde_json::to_string_pretty(&obj).expect("grid serialises");
            text.push('\n');
            text.into_bytes()
        }
    };
    emit(args.out.as_deref(), &bytes)?;
    Ok(())
}

fn parse_initial(text: &str, n: usize) -> CliResult<ModeState> {
    let amplitudes = text
        .split(',')
        .map(|pair| {
            let (re, im) = pair.trim().split_once(':').ok_or_else(|| {
                CliError::Usage(format!(
                    "initial amplitude {pair:?} is not of the form re:im"
                ))
            })?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| CliError::Usage(format!("bad number {s:?} in --initial: {e}")))
            };
            Ok(Complex64::new(parse(re)?, parse(im)?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    if amplitudes.len() != n {
        return Err(CliError::Usage(format!(
            "--initial holds {} amplitudes but N = {n}",
            amplitudes.len()
        )));
    }
    Ok(ModeState::new(amplitudes, 0.0))
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let config = load_config(&args.config)?;
    if !(args.t_end > 0.0 && args.t_end.is_finite()) {
        return Err(CliError::Usage(format!(
            "--t-end must be positive, got {}",
            args.t_end
        )));
    }
    let requested_dt = args.dt.unwrap_or_else(|| default_dt(&config));
    if !(requested_dt > 0.0 && requested_dt.is_finite()) {
        return Err(CliError::Usage(format!(
            "--dt must be positive, got {requested_dt}"
        )));
    }
    // land exactly on t_end
    let steps = ((args.t_end / requested_dt) - 1e-9).ceil().max(1.0) as usize;
    let dt = args.t_end / steps as f64;
    let stride = match args.record_stride {
        Some(0) => return Err(CliError::Usage("--record-stride must be at least 1".into())),
        Some(s) => s,
        None => (steps / 2000).max(1),
    };
    let initial = match &args.initial {
        Some(text) => parse_initial(text, config.n)?,
        None => default_initial(config.n),
    };

    let traj = evolve(&config, &initial, dt, steps, stride)?;
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    emit(args.out.as_deref(), &buf)?;

    let rate = growth_rate(&traj, args.fit_window)?;
    let predicted = 2.0 * spectrum_n_channel(&config)?.max_imag().max(0.0);
    let summary = format!(
        "steps: {steps}\ndt: {}\nintensity_initial: {}\nintensity_final: {}\n\
         growth_rate_fit: {}\ngrowth_rate_predicted: {}\n",
        sig15(dt),
        sig15(initial.intensity()),
        sig15(traj.last().intensity()),
        sig15(rate),
        sig15(predicted),
    );
    if args.out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}
