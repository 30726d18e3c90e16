//! Eigenspectra of N-channel parity-time symmetric coupled-mode systems.
//!
//! The system has `N` channels at a common frequency `ω`, all pairwise
//! coupled with the same real constant `κ`, half of them with gain `+iγ` and
//! half with loss `−iγ`. Its coupled-mode matrix is
//!
//! ```text
//! M_N = ω·I + iγ·S + κ·(J − I)
//! ```
//!
//! where `S` is the ±1 sign diagonal and `J` the all-ones matrix.
//!
//! The crate provides:
//!
//! * [`system`]: configuration and matrix construction,
//! * [`analytic`]: closed-form spectra, the factored characteristic
//!   polynomial and the symmetry-breaking threshold `γ* = N|κ|/2`,
//! * [`eigensolver`]: an independent dense complex QR eigensolver used as
//!   the numerical oracle, with residual checks and multiplicity clustering,
//! * [`dynamics`]: RK4 integration of `i·ȧ = M_N·a` and growth-rate fits,
//! * [`phasemap`]: the `(N, γ)` phase diagram and its boundary curve,
//! * [`validate`]: batch analytic-versus-numeric sweeps.
//!
//! Batch work ([`phasemap::phase_grid_with`], [`validate::verify_batch`])
//! runs on rayon when the `parallel` feature is enabled and falls back to a
//! sequential loop otherwise.

pub mod analytic;
pub mod dynamics;
pub mod eigensolver;
mod error;
pub mod exec;
pub mod fmt;
pub mod linalg;
pub mod phasemap;
pub mod spectrum;
pub mod system;
pub mod validate;

pub use num_complex::Complex64;

pub use error::{PtError, Result};
pub use exec::Execution;
pub use spectrum::{Eigenvalue, PhaseLabel, Spectrum};
pub use system::{build_pt_matrix, CoupledMatrix, Pattern, SystemConfig};
