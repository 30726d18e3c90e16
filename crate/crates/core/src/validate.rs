//! Analytic-versus-numeric spectrum comparison, one config or a batch.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::spectrum_n_channel;
use crate::eigensolver::{cluster_multiplicities, eigenvalues, residual_seeded, SolverSettings};
use crate::error::Result;
use crate::exec::Execution;
use crate::spectrum::{max_matched_deviation, Spectrum};
use crate::system::{build_pt_matrix, Pattern, SystemConfig};

#[derive(Debug, Clone)]
pub struct Comparison {
    pub config: SystemConfig,
    pub analytic: Spectrum,
    /// Raw solver output, sorted by `(Re, Im)`.
    pub numeric_values: Vec<Complex64>,
    /// Solver output clustered into multiplicities.
    pub numeric: Spectrum,
    /// Largest deviation over the closest-first pairing of both multisets.
    pub max_abs_diff: f64,
    /// Largest inverse-iteration residual over the numeric eigenvalues.
    pub max_residual: f64,
    pub frobenius_norm: f64,
}

pub fn compare(config: &SystemConfig, settings: &SolverSettings, seed: u64) -> Result<Comparison> {
    let analytic = spectrum_n_channel(config)?;
    let m = build_pt_matrix(config)?;
    let numeric_values = eigenvalues(&m, settings)?;
    let numeric = cluster_multiplicities(&numeric_values, settings.cluster_tol);
    let max_abs_diff = max_matched_deviation(&analytic.expanded(), &numeric_values)
        .expect("both spectra have N entries");
    let max_residual = numeric_values
        .iter()
        .map(|&l| residual_seeded(&m, l, seed))
        .fold(0.0, f64::max);
    Ok(Comparison {
        config: *config,
        analytic,
        numeric_values,
        numeric,
        max_abs_diff,
        max_residual,
        frobenius_norm: m.frobenius_norm(),
    })
}

/// [`compare`] over many configs; output order follows input order.
pub fn verify_batch(
    configs: &[SystemConfig],
    settings: &SolverSettings,
    seed: u64,
    exec: Execution,
) -> Vec<Result<Comparison>> {
    exec.map(configs, |c| compare(c, settings, seed))
}

/// Uniform sampling box for random configurations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRanges {
    pub omega: (f64, f64),
    pub kappa: (f64, f64),
    pub gamma: (f64, f64),
}

impl Default for ParamRanges {
    fn default() -> Self {
        ParamRanges {
            omega: (-5.0, 5.0),
            kappa: (0.1, 5.0),
            gamma: (0.0, 10.0),
        }
    }
}

/// `per_n` seeded random configs for each channel count in `ns`.
pub fn random_configs(
    seed: u64,
    ns: &[usize],
    per_n: usize,
    ranges: &ParamRanges,
    pattern: Pattern,
) -> Result<Vec<SystemConfig>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(ns.len() * per_n);
    for &n in ns {
        for _ in 0..per_n {
            let omega = rng.gen_range(ranges.omega.0..=ranges.omega.1);
            let kappa = rng.gen_range(ranges.kappa.0..=ranges.kappa.1);
            let gamma = rng.gen_range(ranges.gamma.0..=ranges.gamma.1);
            out.push(SystemConfig::with_pattern(n, omega, kappa, gamma, pattern)?);
        }
    }
    Ok(out)
}
