//! System parameters and the coupled-mode matrix `M_N`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_channel_count, ensure_finite, PtError, Result};

/// Placement of the `+iγ` (gain) and `−iγ` (loss) entries on the diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pattern {
    /// `+, −, +, −, …`
    #[default]
    Alternating,
    /// First `N/2` gain, last `N/2` loss.
    Blocked,
}

impl Pattern {
    /// Diagonal sign vector of length `n`: `+1` for gain, `−1` for loss.
    pub fn signs(self, n: usize) -> Vec<f64> {
        match self {
            Pattern::Alternating => (0..n)
                .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
                .collect(),
            Pattern::Blocked => (0..n).map(|i| if i < n / 2 { 1.0 } else { -1.0 }).collect(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pattern::Alternating => "alternating",
            Pattern::Blocked => "blocked",
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pattern {
    type Err = PtError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alternating" => Ok(Pattern::Alternating),
            "blocked" => Ok(Pattern::Blocked),
            other => Err(PtError::InvalidParameter(format!(
                "unknown pattern {other:?} (expected \"alternating\" or \"blocked\")"
            ))),
        }
    }
}

/// Parameters of an N-channel equal loss/gain system.
///
/// Parsed from JSON as
/// `{"n": 4, "omega": 0.0, "kappa": 1.0, "gamma": 1.0, "pattern": "alternating"}`
/// with `pattern` optional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub n: usize,
    pub omega: f64,
    pub kappa: f64,
    pub gamma: f64,
    #[serde(default)]
    pub pattern: Pattern,
}

impl SystemConfig {
    /// Builds and validates a config with the default (alternating) pattern.
    pub fn new(n: usize, omega: f64, kappa: f64, gamma: f64) -> Result<Self> {
        Self::with_pattern(n, omega, kappa, gamma, Pattern::Alternating)
    }

    pub fn with_pattern(
        n: usize,
        omega: f64,
        kappa: f64,
        gamma: f64,
        pattern: Pattern,
    ) -> Result<Self> {
        let config = SystemConfig {
            n,
            omega,
            kappa,
            gamma,
            pattern,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_channel_count(self.n)?;
        ensure_finite("omega", self.omega)?;
        ensure_finite("kappa", self.kappa)?;
        ensure_finite("gamma", self.gamma)?;
        if self.gamma < 0.0 {
            return Err(PtError::NegativeGamma(self.gamma));
        }
        Ok(())
    }

    /// Parses and validates a JSON object.
    pub fn from_json(text: &str) -> Result<Self> {
        let config: SystemConfig =
            serde_json::from_str(text).map_err(|e| PtError::ConfigParse(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// `N/2`, the number of gain (and of loss) channels.
    pub fn half(&self) -> usize {
        self.n / 2
    }
}

/// Dense row-major complex `N×N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CoupledMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CoupledMatrix {
    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(PtError::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(CoupledMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    /// Sum of the diagonal entries (compensated, so `N·ω` comes out to
    /// within one rounding).
    pub fn trace(&self) -> Complex64 {
        let diag = || (0..self.dim).map(|i| self.get(i, i));
        Complex64::new(
            neumaier_sum(diag().map(|z| z.re)),
            neumaier_sum(diag().map(|z| z.im)),
        )
    }

    /// Matrix-vector product `M·state`.
    pub fn apply(&self, state: &[Complex64]) -> Result<Vec<Complex64>> {
        if state.len() != self.dim {
            return Err(PtError::DimensionMismatch {
                expected: self.dim,
                got: state.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        self.apply_into(state, &mut out);
        Ok(out)
    }

    /// Unchecked product into a caller-provided buffer; both slices must have
    /// length `dim`.
    pub(crate) fn apply_into(&self, state: &[Complex64], out: &mut [Complex64]) {
        for (row_out, row) in out.iter_mut().zip(self.entries.chunks_exact(self.dim)) {
            *row_out = row.iter().zip(state).map(|(m, x)| m * x).sum();
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Returns `M − shift·I`.
    pub fn shifted(&self, shift: Complex64) -> CoupledMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.entries[i * self.dim + i] -= shift;
        }
        out
    }
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Builds `M_N`: diagonal `ω ± iγ` following the config pattern, every
/// off-diagonal entry `κ`.
pub fn build_pt_matrix(config: &SystemConfig) -> Result<CoupledMatrix> {
    config.validate()?;
    let n = config.n;
    let signs = config.pattern.signs(n);
    let mut entries = vec![Complex64::new(config.kappa, 0.0); n * n];
    for (i, s) in signs.iter().enumerate() {
        entries[i * n + i] = Complex64::new(config.omega, s * config.gamma);
    }
    Ok(CoupledMatrix { dim: n, entries })
}

/// Builds the matrix for an arbitrary ±1 sign diagonal (any shuffle with
/// `N/2` of each sign).
pub fn build_with_signs(config: &SystemConfig, signs: &[f64]) -> Result<CoupledMatrix> {
    config.validate()?;
    let n = config.n;
    if signs.len() != n {
        return Err(PtError::DimensionMismatch {
            expected: n,
            got: signs.len(),
        });
    }
    let gains = signs.iter().filter(|&&s| s == 1.0).count();
    let losses = signs.iter().filter(|&&s| s == -1.0).count();
    if gains != n / 2 || losses != n / 2 {
        return Err(PtError::InvalidParameter(format!(
            "sign diagonal must hold {h} entries of +1 and {h} of -1",
            h = n / 2
        )));
    }
    let mut entries = vec![Complex64::new(config.kappa, 0.0); n * n];
    for (i, s) in signs.iter().enumerate() {
        entries[i * n + i] = Complex64::new(config.omega, s * config.gamma);
    }
    Ok(CoupledMatrix { dim: n, entries })
}

/// Trace of a matrix; equals `N·ω` for every PT matrix.
pub fn matrix_trace(m: &CoupledMatrix) -> Complex64 {
    m.trace()
}
