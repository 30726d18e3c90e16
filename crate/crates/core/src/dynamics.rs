//! Time integration of the coupled-mode equations `i·ȧ = M_N·a`.
//!
//! Diagonal entries `+iγ` are gain channels: with `ȧ = −i·M·a` a mode with
//! eigenvalue `λ` evolves as `e^{−iλt}`, so its intensity grows at `2·Im λ`.

use std::io::{self, Write};

use num_complex::Complex64;

use crate::error::{ensure_finite, PtError, Result};
use crate::fmt::sig15;
use crate::system::{build_pt_matrix, CoupledMatrix, SystemConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeState {
    pub amplitudes: Vec<Complex64>,
    pub time: f64,
}

impl ModeState {
    pub fn new(amplitudes: Vec<Complex64>, time: f64) -> Self {
        ModeState { amplitudes, time }
    }

    /// Total intensity `Σ|aᵢ|²`.
    pub fn intensity(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<ModeState>,
    pub dt: f64,
    pub record_stride: usize,
    pub config: SystemConfig,
}

impl Trajectory {
    pub fn last(&self) -> &ModeState {
        self.samples
            .last()
            .expect("trajectory holds the initial state")
    }

    /// Writes `t, re_a1, im_a1, …, re_aN, im_aN, intensity` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let n = self.config.n;
        let mut header = String::from("t");
        for i in 1..=n {
            header.push_str(&format!(",re_a{i},im_a{i}"));
        }
        header.push_str(",intensity\n");
        out.write_all(header.as_bytes())?;
        for s in &self.samples {
            let mut line = sig15(s.time);
            for a in &s.amplitudes {
                line.push(',');
                line.push_str(&sig15(a.re));
                line.push(',');
                line.push_str(&sig15(a.im));
            }
            line.push(',');
            line.push_str(&sig15(s.intensity()));
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

/// `dt = 0.01 / max(|ω| + γ + N|κ|, 1)`.
pub fn default_dt(config: &SystemConfig) -> f64 {
    let scale = config.omega.abs() + config.gamma + config.n as f64 * config.kappa.abs();
    0.01 / scale.max(1.0)
}

/// Deterministic unit-norm start `aₖ ∝ (k+1)·e^{ik}`.
///
/// Amplitudes differ within the gain and within the loss channels, so the
/// state overlaps both the degenerate families and the quadratic pair for
/// either diagonal pattern. A uniform vector would be orthogonal to the
/// degenerate families.
pub fn default_initial(n: usize) -> ModeState {
    let raw: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar((k + 1) as f64, k as f64))
        .collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    ModeState::new(raw.into_iter().map(|z| z / norm).collect(), 0.0)
}

/// Classical RK4 integrator for `ȧ = −i·M·a` with preallocated stages.
struct Rk4<'a> {
    m: &'a CoupledMatrix,
    k: [Vec<Complex64>; 4],
    tmp: Vec<Complex64>,
}

impl<'a> Rk4<'a> {
    fn new(m: &'a CoupledMatrix) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); m.dim()];
        Rk4 {
            m,
            k: [z.clone(), z.clone(), z.clone(), z.clone()],
            tmp: z,
        }
    }

    fn rhs(m: &CoupledMatrix, a: &[Complex64], out: &mut [Complex64]) {
        m.apply_into(a, out);
        let minus_i = Complex64::new(0.0, -1.0);
        out.iter_mut().for_each(|z| *z *= minus_i);
    }

    fn step(&mut self, a: &mut [Complex64], dt: f64) {
        let [k1, k2, k3, k4] = &mut self.k;
        Self::rhs(self.m, a, k1);
        for ((t, x), k) in self.tmp.iter_mut().zip(a.iter()).zip(k1.iter()) {
            *t = x + k * (0.5 * dt);
        }
        Self::rhs(self.m, &self.tmp, k2);
        for ((t, x), k) in self.tmp.iter_mut().zip(a.iter()).zip(k2.iter()) {
            *t = x + k * (0.5 * dt);
        }
        Self::rhs(self.m, &self.tmp, k3);
        for ((t, x), k) in self.tmp.iter_mut().zip(a.iter()).zip(k3.iter()) {
            *t = x + k * dt;
        }
        Self::rhs(self.m, &self.tmp, k4);
        for (i, x) in a.iter_mut().enumerate() {
            *x += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
}

/// Integrates `steps` fixed RK4 steps of size `dt` from `initial`, keeping
/// the initial state and every `record_stride`-th state after it.
pub fn evolve(
    config: &SystemConfig,
    initial: &ModeState,
    dt: f64,
    steps: usize,
    record_stride: usize,
) -> Result<Trajectory> {
    let m = build_pt_matrix(config)?;
    ensure_finite("dt", dt)?;
    ensure_finite("initial time", initial.time)?;
    if dt <= 0.0 {
        return Err(PtError::InvalidParameter(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if steps == 0 {
        return Err(PtError::InvalidParameter("steps must be at least 1".into()));
    }
    if record_stride == 0 {
        return Err(PtError::InvalidParameter(
            "record_stride must be at least 1".into(),
        ));
    }
    if initial.amplitudes.len() != config.n {
        return Err(PtError::DimensionMismatch {
            expected: config.n,
            got: initial.amplitudes.len(),
        });
    }
    if initial
        .amplitudes
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(PtError::Unstable {
            step: 0,
            time: initial.time,
        });
    }

    let t0 = initial.time;
    let mut a = initial.amplitudes.clone();
    let mut samples = Vec::with_capacity(steps / record_stride + 1);
    samples.push(initial.clone());
    let mut rk = Rk4::new(&m);
    for step in 1..=steps {
        rk.step(&mut a, dt);
        if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(PtError::Unstable {
                step,
                time: t0 + step as f64 * dt,
            });
        }
        if step % record_stride == 0 {
            samples.push(ModeState::new(a.clone(), t0 + step as f64 * dt));
        }
    }
    Ok(Trajectory {
        samples,
        dt,
        record_stride,
        config: *config,
    })
}

/// Least-squares slope of `ln Σ|aᵢ|²` against `t` over the trailing
/// `fit_window_fraction` of the samples.
pub fn growth_rate(traj: &Trajectory, fit_window_fraction: f64) -> Result<f64> {
    if !(fit_window_fraction > 0.0 && fit_window_fraction <= 1.0) {
        return Err(PtError::InvalidParameter(format!(
            "fit_window_fraction must lie in (0, 1], got {fit_window_fraction}"
        )));
    }
    let len = traj.samples.len();
    let count = ((len as f64) * fit_window_fraction).floor() as usize;
    if count < 10 {
        return Err(PtError::DegenerateFit(format!(
            "fit window holds {count} samples, need at least 10"
        )));
    }
    let window = &traj.samples[len - count..];
    let mut points = Vec::with_capacity(count);
    for s in window {
        let intensity = s.intensity();
        if !(intensity > 0.0 && intensity.is_finite()) {
            return Err(PtError::DegenerateFit(format!(
                "total intensity {intensity} at t = {} cannot be logged",
                s.time
            )));
        }
        points.push((s.time, intensity.ln()));
    }
    let nf = count as f64;
    let mean_t = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), &(t, y)| {
        let dt = t - mean_t;
        (sxy + dt * (y - mean_y), sxx + dt * dt)
    });
    Ok(sxy / sxx)
}
