//! Dense complex eigensolver used as the numerical oracle.
//!
//! Householder reduction to upper Hessenberg form followed by explicitly
//! shifted complex QR sweeps (Givens rotations) with Wilkinson shifts and
//! deflation of negligible subdiagonal entries. Nothing in here depends on
//! the closed-form results in [`crate::analytic`].

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{PtError, Result};
use crate::linalg::{norm2, Lu};
use crate::spectrum::{classify, cmp_complex, Eigenvalue, Spectrum, BOUNDARY_TOL};
use crate::system::CoupledMatrix;

/// Seed for the random start vector of [`residual`].
pub const DEFAULT_SEED: u64 = 42;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Relative deflation threshold for subdiagonal entries.
    pub tol: f64,
    /// QR sweeps allowed per eigenvalue; `None` means `100·N`.
    pub max_iter: Option<usize>,
    /// Absolute clustering radius used by [`cluster_multiplicities`].
    pub cluster_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: f64::EPSILON,
            max_iter: None,
            cluster_tol: 1e-8,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(PtError::InvalidParameter(format!(
                "solver tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == Some(0) {
            return Err(PtError::InvalidParameter(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.cluster_tol.is_nan() || self.cluster_tol < self.tol {
            return Err(PtError::InvalidParameter(format!(
                "cluster_tol ({}) must be at least tol ({})",
                self.cluster_tol, self.tol
            )));
        }
        Ok(())
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iter.unwrap_or(100 * n.max(1))
    }
}

/// Row-major square work matrix.
struct Work {
    n: usize,
    a: Vec<Complex64>,
}

impl Work {
    #[inline]
    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.a[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.a[i * self.n + j] = v;
    }
}

/// In-place unitary similarity to upper Hessenberg form.
#[allow(clippy::needless_range_loop)]
fn hessenberg(w: &mut Work) {
    let n = w.n;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for k in 0..n - 2 {
        let tail: f64 = (k + 2..n).map(|i| w.at(i, k).norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = w.at(k + 1, k);
        let xnorm = (tail + x0.norm_sqr()).sqrt();
        // alpha = −e^{i·arg(x0)}·‖x‖ avoids cancellation in v₀ = x₀ − alpha
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * xnorm;
        for i in 0..n {
            v[i] = if i > k + 1 {
                w.at(i, k)
            } else if i == k + 1 {
                x0 - alpha
            } else {
                ZERO
            };
        }
        let vnorm = norm2(&v[k + 1..]);
        for vi in v[k + 1..].iter_mut() {
            *vi /= vnorm;
        }

        // H ← (I − 2vvᴴ)·H
        for j in k..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i].conj() * w.at(i, j)).sum();
            for i in k + 1..n {
                let val = w.at(i, j) - v[i] * s * 2.0;
                w.set(i, j, val);
            }
        }
        // H ← H·(I − 2vvᴴ)
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| w.at(i, j) * v[j]).sum();
            for j in k + 1..n {
                let val = w.at(i, j) - s * v[j].conj() * 2.0;
                w.set(i, j, val);
            }
        }
        w.set(k + 1, k, alpha);
        for i in k + 2..n {
            w.set(i, k, ZERO);
        }
    }
}

/// Eigenvalue of the trailing 2×2 block of the active window closest to its
/// last diagonal entry.
fn wilkinson_shift(w: &Work, hi: usize) -> Complex64 {
    let a = w.at(hi - 1, hi - 1);
    let b = w.at(hi - 1, hi);
    let c = w.at(hi, hi - 1);
    let d = w.at(hi, hi);
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let root = (half_diff * half_diff + b * c).sqrt();
    let mu1 = half_tr + root;
    let mu2 = half_tr - root;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// One explicitly shifted QR sweep on the window `lo..=hi`.
fn qr_sweep(
    w: &mut Work,
    lo: usize,
    hi: usize,
    shift: Complex64,
    rot: &mut Vec<(Complex64, Complex64)>,
) {
    for i in lo..=hi {
        let v = w.at(i, i) - shift;
        w.set(i, i, v);
    }
    rot.clear();
    for k in lo..hi {
        let x = w.at(k, k);
        let y = w.at(k + 1, k);
        let r = x.norm().hypot(y.norm());
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), ZERO)
        } else {
            (x / r, y / r)
        };
        // rows k, k+1 ← [c̄ s̄; −s c]·rows
        for j in k..=hi {
            let a = w.at(k, j);
            let b = w.at(k + 1, j);
            w.set(k, j, c.conj() * a + s.conj() * b);
            w.set(k + 1, j, c * b - s * a);
        }
        rot.push((c, s));
    }
    for (offset, &(c, s)) in rot.iter().enumerate() {
        let k = lo + offset;
        // columns k, k+1 ← columns·[c −s̄; s c̄]
        for i in lo..=k + 1 {
            let a = w.at(i, k);
            let b = w.at(i, k + 1);
            w.set(i, k, a * c + b * s);
            w.set(i, k + 1, b * c.conj() - a * s.conj());
        }
    }
    for i in lo..=hi {
        let v = w.at(i, i) + shift;
        w.set(i, i, v);
    }
}

/// All eigenvalues of `m`, sorted by `(Re, Im)`.
pub fn eigenvalues(m: &CoupledMatrix, settings: &SolverSettings) -> Result<Vec<Complex64>> {
    settings.validate()?;
    let n = m.dim();
    if let Some(bad) = m
        .entries()
        .iter()
        .find(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(PtError::NonFinite {
            name: "matrix entry",
            value: if bad.re.is_finite() { bad.im } else { bad.re },
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut w = Work {
        n,
        a: m.entries().to_vec(),
    };
    hessenberg(&mut w);

    let fro = m.frobenius_norm();
    let cap = settings.iteration_cap(n);
    let mut out = vec![ZERO; n];
    let mut rot = Vec::with_capacity(n);
    let mut hi = n - 1;
    let mut iter = 0;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = w.at(lo, lo - 1).norm();
            let mut scale = w.at(lo - 1, lo - 1).norm() + w.at(lo, lo).norm();
            if scale == 0.0 {
                scale = fro;
            }
            if sub <= settings.tol * scale {
                w.set(lo, lo - 1, ZERO);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            out[hi] = w.at(hi, hi);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > cap {
            return Err(PtError::NoConvergence {
                max_iter: cap,
                deflated: n - 1 - hi,
                dim: n,
            });
        }
        let shift = if iter % 11 == 0 {
            // ad hoc shift to break cycles
            let sub = w.at(hi, hi - 1).norm();
            w.at(hi, hi) + Complex64::new(0.75 * sub, 0.4 * sub)
        } else {
            wilkinson_shift(&w, hi)
        };
        qr_sweep(&mut w, lo, hi, shift, &mut rot);
    }
    out[0] = w.at(0, 0);
    out.sort_by(cmp_complex);
    Ok(out)
}

/// Residual `‖Mv − λv‖₂/‖v‖₂` with `v` from one inverse-iteration step
/// on `M − λI`, using [`DEFAULT_SEED`] for the start vector.
pub fn residual(m: &CoupledMatrix, lambda: Complex64) -> f64 {
    residual_seeded(m, lambda, DEFAULT_SEED)
}

pub fn residual_seeded(m: &CoupledMatrix, lambda: Complex64, seed: u64) -> f64 {
    let n = m.dim();
    if n == 0 {
        return 0.0;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut start: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let s = norm2(&start);
    start.iter_mut().for_each(|z| *z /= s);

    let solve = |shift: Complex64| -> Option<Vec<Complex64>> {
        let lu = Lu::new(&m.shifted(shift));
        if lu.min_pivot() == 0.0 {
            return None;
        }
        let v = lu.solve(&start);
        v.iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
            .then_some(v)
    };
    let v = solve(lambda).unwrap_or_else(|| {
        let delta = 1e-14 * m.frobenius_norm().max(f64::MIN_POSITIVE);
        solve(lambda + delta).unwrap_or_else(|| start.clone())
    });

    let mv = m.apply(&v).expect("vector has matrix dimension");
    let r: Vec<Complex64> = mv.iter().zip(&v).map(|(a, b)| a - b * lambda).collect();
    norm2(&r) / norm2(&v)
}

/// Groups numerically computed eigenvalues into an eigenvalue multiset.
///
/// Values are visited in `(Re, Im)` order; each joins the first existing
/// cluster whose centroid lies within `cluster_tol` in both components,
/// or starts a new one. Visiting open clusters (rather than only the last)
/// keeps conjugate families with equal real parts from being split by
/// rounding noise in `Re`.
pub fn cluster_multiplicities(values: &[Complex64], cluster_tol: f64) -> Spectrum {
    let mut sorted = values.to_vec();
    sorted.sort_by(cmp_complex);
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for v in sorted {
        let hit = clusters.iter_mut().find(|(sum, count)| {
            let centroid = *sum / *count as f64;
            (centroid.re - v.re).abs() <= cluster_tol && (centroid.im - v.im).abs() <= cluster_tol
        });
        match hit {
            Some((sum, count)) => {
                *sum += v;
                *count += 1;
            }
            None => clusters.push((v, 1)),
        }
    }
    Spectrum::new(
        clusters
            .into_iter()
            .map(|(sum, count)| {
                let value = sum / count as f64;
                Eigenvalue {
                    value,
                    multiplicity: count,
                    phase: classify(value, BOUNDARY_TOL),
                }
            })
            .collect(),
    )
}
