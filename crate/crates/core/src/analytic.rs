//! Closed-form spectra of the PT coupled-mode matrix.
//!
//! With `h = N/2` the characteristic polynomial factors as
//!
//! ```text
//! [λ − (ω−κ+iγ)]^(h−1) · [λ − (ω−κ−iγ)]^(h−1)
//!   · [λ² − 2(ω+(h−1)κ)λ + (ω+(h−1)κ)² + γ² − h²κ²]
//! ```
//!
//! so the spectrum is two `(h−1)`-fold degenerate families `ω − κ ± iγ`
//! (always broken for `γ > 0`) plus the pair `(h−1)κ + ω ± √((hκ)² − γ²)`,
//! which is real below `γ* = h|κ|` and complex above it.

use num_complex::Complex64;

use crate::error::{ensure_channel_count, Result};
pub use crate::spectrum::classify;
use crate::spectrum::{Eigenvalue, PhaseLabel, Spectrum};
use crate::system::SystemConfig;

pub use crate::spectrum::BOUNDARY_TOL;

/// Relative discriminant magnitude below which the quadratic pair is
/// reported as an exceptional point.
pub const EXCEPTIONAL_TOL: f64 = 1e-12;

/// Entries closer than this (relative) are reported as one eigenvalue.
const COINCIDENCE_TOL: f64 = 1e-12;

/// The two roots `center ± √disc`, with the `+` root taking `+i√|disc|`
/// when `disc < 0`. Collapses to a double exceptional root when
/// `|disc| ≤ EXCEPTIONAL_TOL·scale²` and `gamma > 0`.
fn quadratic_pair(center: f64, disc: f64, scale: f64, gamma: f64) -> Vec<Eigenvalue> {
    if gamma.abs() > 0.0 && disc.abs() <= EXCEPTIONAL_TOL * scale * scale {
        return vec![Eigenvalue {
            value: Complex64::new(center, 0.0),
            multiplicity: 2,
            phase: PhaseLabel::Exceptional,
        }];
    }
    let (plus, minus) = if disc >= 0.0 {
        let r = disc.sqrt();
        (
            Complex64::new(center + r, 0.0),
            Complex64::new(center - r, 0.0),
        )
    } else {
        let r = (-disc).sqrt();
        (Complex64::new(center, r), Complex64::new(center, -r))
    };
    [plus, minus]
        .into_iter()
        .map(|value| Eigenvalue {
            value,
            multiplicity: 1,
            phase: classify(value, BOUNDARY_TOL),
        })
        .collect()
}

fn degenerate(value: Complex64, multiplicity: usize) -> Eigenvalue {
    Eigenvalue {
        value,
        multiplicity,
        phase: classify(value, BOUNDARY_TOL),
    }
}

/// Merges entries that coincide (the Hermitian limit `γ = 0`, where both
/// degenerate families and possibly the lower quadratic root meet).
fn merge_coincident(entries: Vec<Eigenvalue>) -> Spectrum {
    let mut merged: Vec<Eigenvalue> = Vec::with_capacity(entries.len());
    for e in entries.into_iter().filter(|e| e.multiplicity > 0) {
        let hit = merged.iter_mut().find(|m| {
            let scale = m.value.norm().max(e.value.norm()).max(1.0);
            (m.value - e.value).norm() <= COINCIDENCE_TOL * scale
        });
        match hit {
            Some(m) => {
                m.multiplicity += e.multiplicity;
                if e.phase == PhaseLabel::Exceptional {
                    m.phase = PhaseLabel::Exceptional;
                }
            }
            None => merged.push(e),
        }
    }
    Spectrum::new(merged)
}

/// Two-channel spectrum `ω ± √(κ² − γ²)`.
pub fn spectrum_two_channel(omega: f64, kappa: f64, gamma: f64) -> Spectrum {
    merge_coincident(quadratic_pair(
        omega,
        kappa * kappa - gamma * gamma,
        kappa,
        gamma,
    ))
}

/// Four-channel spectrum: `ω − κ ± iγ` and `κ + ω ± √(4κ² − γ²)`.
pub fn spectrum_four_channel(omega: f64, kappa: f64, gamma: f64) -> Spectrum {
    let mut entries = vec![
        degenerate(Complex64::new(omega - kappa, gamma), 1),
        degenerate(Complex64::new(omega - kappa, -gamma), 1),
    ];
    entries.extend(quadratic_pair(
        kappa + omega,
        4.0 * kappa * kappa - gamma * gamma,
        2.0 * kappa,
        gamma,
    ));
    merge_coincident(entries)
}

/// General even-N spectrum.
///
/// For `N = 2` the degenerate families have multiplicity zero and are
/// omitted, which reduces this to [`spectrum_two_channel`].
pub fn spectrum_n_channel(config: &SystemConfig) -> Result<Spectrum> {
    config.validate()?;
    let SystemConfig {
        omega,
        kappa,
        gamma,
        ..
    } = *config;
    let h = config.half();
    let m = (h - 1) as f64;
    let hk = h as f64 * kappa;
    let mut entries = vec![
        degenerate(Complex64::new(omega - kappa, gamma), h - 1),
        degenerate(Complex64::new(omega - kappa, -gamma), h - 1),
    ];
    entries.extend(quadratic_pair(
        m * kappa + omega,
        hk * hk - gamma * gamma,
        hk,
        gamma,
    ));
    Ok(merge_coincident(entries))
}

/// Evaluates the factored characteristic polynomial at `lambda`.
///
/// Equals `det(M_N − λI)` for the matrix built from `config`.
pub fn char_poly_eval(config: &SystemConfig, lambda: Complex64) -> Result<Complex64> {
    config.validate()?;
    let SystemConfig {
        omega,
        kappa,
        gamma,
        ..
    } = *config;
    let h = config.half();
    let exp = (h - 1) as i32;
    let gain_root = Complex64::new(omega - kappa, gamma);
    let loss_root = Complex64::new(omega - kappa, -gamma);
    let center = omega + (h - 1) as f64 * kappa;
    let hk = h as f64 * kappa;
    let quadratic =
        lambda * lambda - lambda * (2.0 * center) + (center * center + gamma * gamma - hk * hk);
    Ok((lambda - gain_root).powi(exp) * (lambda - loss_root).powi(exp) * quadratic)
}

/// Loss/gain value `γ* = N|κ|/2` at which the quadratic pair coalesces.
pub fn breaking_threshold(n: usize, kappa: f64) -> Result<f64> {
    ensure_channel_count(n)?;
    Ok(n as f64 * kappa.abs() / 2.0)
}
