//! The `(N, γ)` phase diagram of the non-degenerate eigenvalue pair.
//!
//! `f(N, γ) = (Nκ/2)² − γ²` is the discriminant of the quadratic factor:
//! positive means the pair is real (symmetric), negative means a complex
//! conjugate pair (broken). Only that pair is labelled; the degenerate
//! families are broken whenever `γ > 0`.

use std::io::{self, Write};

use serde::Serialize;

use crate::error::{ensure_channel_count, ensure_finite, PtError, Result};
use crate::exec::Execution;
use crate::fmt::{round_sig15, sig15};
use crate::spectrum::PhaseLabel;

/// Relative width of the exceptional band around `f = 0`.
pub const PHASE_BOUNDARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseCell {
    pub n: usize,
    pub gamma: f64,
    pub f: f64,
    pub phase: PhaseLabel,
}

/// `f(N, γ) = (N/2)² − γ²`, the `κ = 1` form.
pub fn f_value(n: usize, gamma: f64) -> Result<f64> {
    f_general(n, gamma, 1.0)
}

/// `(Nκ/2)² − γ²`.
pub fn f_general(n: usize, gamma: f64, kappa: f64) -> Result<f64> {
    ensure_channel_count(n)?;
    ensure_finite("gamma", gamma)?;
    ensure_finite("kappa", kappa)?;
    if gamma < 0.0 {
        return Err(PtError::NegativeGamma(gamma));
    }
    let hk = n as f64 * kappa / 2.0;
    Ok(hk * hk - gamma * gamma)
}

/// Phase of the quadratic pair from the sign of `f`.
pub fn phase_of(f: f64, n: usize, kappa: f64) -> PhaseLabel {
    let hk = n as f64 * kappa / 2.0;
    let band = PHASE_BOUNDARY_TOL * hk * hk;
    if f > band {
        PhaseLabel::Symmetric
    } else if f < -band {
        PhaseLabel::Broken
    } else {
        PhaseLabel::Exceptional
    }
}

pub fn cell(n: usize, gamma: f64, kappa: f64) -> Result<PhaseCell> {
    let f = f_general(n, gamma, kappa)?;
    Ok(PhaseCell {
        n,
        gamma,
        f,
        phase: phase_of(f, n, kappa),
    })
}

/// Parameters of a phase-diagram grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_min: usize,
    pub n_max: usize,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_steps: usize,
    pub kappa: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n_min: 2,
            n_max: 20,
            gamma_min: 0.0,
            gamma_max: 10.0,
            gamma_steps: 101,
            kappa: 1.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        ensure_channel_count(self.n_min)?;
        ensure_channel_count(self.n_max)?;
        if self.n_min > self.n_max {
            return Err(PtError::InvalidParameter(format!(
                "n_min ({}) exceeds n_max ({})",
                self.n_min, self.n_max
            )));
        }
        ensure_finite("gamma_min", self.gamma_min)?;
        ensure_finite("gamma_max", self.gamma_max)?;
        ensure_finite("kappa", self.kappa)?;
        if self.gamma_min < 0.0 {
            return Err(PtError::NegativeGamma(self.gamma_min));
        }
        if self.gamma_max < self.gamma_min {
            return Err(PtError::InvalidParameter(format!(
                "gamma_max ({}) is below gamma_min ({})",
                self.gamma_max, self.gamma_min
            )));
        }
        if self.gamma_steps < 2 {
            return Err(PtError::InvalidParameter(format!(
                "gamma_steps must be at least 2, got {}",
                self.gamma_steps
            )));
        }
        Ok(())
    }

    /// Uniform samples including both endpoints exactly.
    pub fn gammas(&self) -> Vec<f64> {
        let last = self.gamma_steps - 1;
        let span = self.gamma_max - self.gamma_min;
        (0..self.gamma_steps)
            .map(|j| {
                if j == last {
                    self.gamma_max
                } else {
                    self.gamma_min + span * j as f64 / last as f64
                }
            })
            .collect()
    }

    pub fn channel_counts(&self) -> Vec<usize> {
        (self.n_min..=self.n_max).step_by(2).collect()
    }
}

/// Grid cells ordered by `N`, then `γ`.
pub fn phase_grid(
    n_min: usize,
    n_max: usize,
    gamma_min: f64,
    gamma_max: f64,
    gamma_steps: usize,
    kappa: f64,
) -> Result<Vec<PhaseCell>> {
    let spec = GridSpec {
        n_min,
        n_max,
        gamma_min,
        gamma_max,
        gamma_steps,
        kappa,
    };
    phase_grid_with(&spec, Execution::default())
}

pub fn phase_grid_with(spec: &GridSpec, exec: Execution) -> Result<Vec<PhaseCell>> {
    spec.validate()?;
    let gammas = spec.gammas();
    let points: Vec<(usize, f64)> = spec
        .channel_counts()
        .into_iter()
        .flat_map(|n| gammas.iter().map(move |&g| (n, g)))
        .collect();
    exec.map(&points, |&(n, g)| cell(n, g, spec.kappa))
        .into_iter()
        .collect()
}

/// `(N, Nκ/2)` for every even `N` in `n_min..=n_max`.
pub fn boundary_curve(n_min: usize, n_max: usize, kappa: f64) -> Result<Vec<(usize, f64)>> {
    ensure_channel_count(n_min)?;
    ensure_channel_count(n_max)?;
    ensure_finite("kappa", kappa)?;
    Ok((n_min..=n_max)
        .step_by(2)
        .map(|n| (n, n as f64 * kappa.abs() / 2.0))
        .collect())
}

/// `n,gamma,f,phase` rows.
pub fn write_grid_csv<W: Write>(cells: &[PhaseCell], mut out: W) -> io::Result<()> {
    writeln!(out, "n,gamma,f,phase")?;
    for c in cells {
        writeln!(out, "{},{},{},{}", c.n, sig15(c.gamma), sig15(c.f), c.phase)?;
    }
    Ok(())
}

/// `n,gamma_star` rows.
pub fn write_boundary_csv<W: Write>(curve: &[(usize, f64)], mut out: W) -> io::Result<()> {
    writeln!(out, "n,gamma_star")?;
    for (n, g) in curve {
        writeln!(out, "{},{}", n, sig15(*g))?;
    }
    Ok(())
}

/// Cell as a JSON object with keys `n, gamma, f, phase`.
pub fn cell_json(c: &PhaseCell) -> serde_json::Value {
    serde_json::json!({
        "n": c.n,
        "gamma": round_sig15(c.gamma),
        "f": round_sig15(c.f),
        "phase": c.phase,
    })
}
