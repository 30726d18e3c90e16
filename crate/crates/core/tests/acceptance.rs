//! Exit criteria. Every criterion runs inside one test so that all of them
//! are reported even when one fails:
//!
//! ```text
//! cargo test -p ptsym --test acceptance -- --nocapture
//! ```

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ptsym::analytic::{
    breaking_threshold, char_poly_eval, spectrum_four_channel, spectrum_n_channel,
    spectrum_two_channel,
};
use ptsym::dynamics::{default_dt, default_initial, evolve, growth_rate, ModeState};
use ptsym::eigensolver::{cluster_multiplicities, eigenvalues, SolverSettings};
use ptsym::linalg::determinant;
use ptsym::phasemap::{boundary_curve, cell};
use ptsym::spectrum::{classify, max_matched_deviation, PhaseLabel, BOUNDARY_TOL};
use ptsym::validate::{random_configs, ParamRanges};
use ptsym::{build_pt_matrix, Pattern, Spectrum, SystemConfig};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn numeric(config: &SystemConfig) -> Vec<Complex64> {
    eigenvalues(
        &build_pt_matrix(config).unwrap(),
        &SolverSettings::default(),
    )
    .unwrap()
}

fn deviation(analytic: &Spectrum, numeric: &[Complex64]) -> f64 {
    max_matched_deviation(&analytic.expanded(), numeric).unwrap()
}

/// Phases of the non-degenerate pair (entries away from the ω−κ±iγ families).
fn pair_phases(s: &Spectrum, c: &SystemConfig) -> Vec<PhaseLabel> {
    let fam = c.omega - c.kappa;
    s.eigenvalues()
        .iter()
        .filter(|e| c.n == 2 || (e.value.re - fam).abs() > 1e-12 * (1.0 + fam.abs()))
        .map(|e| e.phase)
        .collect()
}

fn two_channel_configs() -> Vec<SystemConfig> {
    random_configs(1, &[2], 500, &ParamRanges::default(), Pattern::Alternating).unwrap()
}

fn four_channel_configs() -> Vec<SystemConfig> {
    random_configs(2, &[4], 500, &ParamRanges::default(), Pattern::Alternating).unwrap()
}

fn n_channel_configs() -> Vec<SystemConfig> {
    let ns: Vec<usize> = (2..=64).step_by(2).collect();
    random_configs(3, &ns, 20, &ParamRanges::default(), Pattern::Alternating).unwrap()
}

fn ac1_two_channel() -> Outcome {
    let mut worst = 0.0_f64;
    for c in two_channel_configs() {
        let a = spectrum_two_channel(c.omega, c.kappa, c.gamma);
        worst = worst.max(deviation(&a, &numeric(&c)));
    }
    outcome(
        worst <= 1e-10,
        format!("500 draws, max |Δλ| = {worst:.3e} (tol 1e-10)"),
    )
}

fn ac2_four_channel() -> Outcome {
    let mut worst = 0.0_f64;
    let mut structure_ok = true;
    for c in four_channel_configs() {
        let a = spectrum_four_channel(c.omega, c.kappa, c.gamma);
        let num = numeric(&c);
        worst = worst.max(deviation(&a, &num));
        // ω − κ ± iγ each appear once, analytically and numerically
        for sign in [1.0, -1.0] {
            let target = Complex64::new(c.omega - c.kappa, sign * c.gamma);
            let hits = num
                .iter()
                .filter(|z| (**z - target).norm() <= 1e-10)
                .count();
            let entry = a.eigenvalues().iter().find(|e| e.value == target);
            structure_ok &= hits == 1 && entry.map(|e| e.multiplicity) == Some(1);
        }
    }
    let mut flips_ok = true;
    for kappa in [0.1, 0.5, 1.0, 2.5, 5.0] {
        let gs = 2.0 * kappa;
        let below = SystemConfig::new(4, 0.3, kappa, gs - 1e-6).unwrap();
        let above = SystemConfig::new(4, 0.3, kappa, gs + 1e-6).unwrap();
        let sb = spectrum_four_channel(below.omega, kappa, below.gamma);
        let sa = spectrum_four_channel(above.omega, kappa, above.gamma);
        flips_ok &= pair_phases(&sb, &below) == [PhaseLabel::Symmetric; 2];
        flips_ok &= pair_phases(&sa, &above) == [PhaseLabel::Broken; 2];
        // numeric: the pair real below, complex above
        let real_count = |c: &SystemConfig| {
            numeric(c)
                .iter()
                .filter(|z| classify(**z, BOUNDARY_TOL) == PhaseLabel::Symmetric)
                .count()
        };
        flips_ok &= real_count(&below) == 2 && real_count(&above) == 0;
    }
    outcome(
        worst <= 1e-10 && structure_ok && flips_ok,
        format!(
            "500 draws, max |Δλ| = {worst:.3e}; ω−κ±iγ structure {}; flip at 2κ±1e-6 {}",
            ok(structure_ok),
            ok(flips_ok)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn ac3_n_channel() -> Outcome {
    let mut worst = 0.0_f64;
    let mut profile_fail = Vec::new();
    let mut profiled = 0;
    for c in n_channel_configs() {
        let a = spectrum_n_channel(&c).unwrap();
        let num = numeric(&c);
        worst = worst.max(deviation(&a, &num));
        let gs = breaking_threshold(c.n, c.kappa).unwrap();
        if c.n >= 4 && (c.gamma - gs).abs() > 1e-3 * gs && c.gamma > 1e-6 {
            profiled += 1;
            let h = c.n / 2;
            let mut got = cluster_multiplicities(&num, SolverSettings::default().cluster_tol)
                .multiplicities();
            got.sort_unstable();
            let mut want = vec![1, 1, h - 1, h - 1];
            want.sort_unstable();
            if got != want {
                profile_fail.push((c.n, c.gamma));
            }
        }
    }
    outcome(
        worst <= 1e-10 && profile_fail.is_empty(),
        format!(
            "N = 2..64 x 20 draws, max |Δλ| = {worst:.3e}; multiplicity profile {}/{profiled} recovered",
            profiled - profile_fail.len()
        ),
    )
}

fn ac4_char_poly() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for c in random_configs(
        5,
        &[4, 8, 16],
        4,
        &ParamRanges::default(),
        Pattern::Alternating,
    )
    .unwrap()
    {
        let m = build_pt_matrix(&c).unwrap();
        for _ in 0..50 {
            let lambda = Complex64::new(
                c.omega + rng.gen_range(-10.0..10.0),
                rng.gen_range(-10.0..10.0),
            );
            let p = char_poly_eval(&c, lambda).unwrap();
            let d = determinant(&m.shifted(lambda));
            worst = worst.max((p - d).norm() / d.norm());
            count += 1;
        }
    }
    outcome(
        worst <= 1e-8,
        format!("{count} evaluations, max relative error = {worst:.3e} (tol 1e-8)"),
    )
}

fn ac5_trace() -> Outcome {
    let mut corpus = two_channel_configs();
    corpus.extend(four_channel_configs());
    corpus.extend(n_channel_configs());
    for n in [4, 8, 12] {
        corpus
            .extend(random_configs(9, &[n], 5, &ParamRanges::default(), Pattern::Blocked).unwrap());
    }
    let mut worst = 0.0_f64;
    let mut worst_numeric = 0.0_f64;
    for c in &corpus {
        let target = c.n as f64 * c.omega;
        let s = spectrum_n_channel(c).unwrap().sum();
        worst = worst.max((s - target).norm() / (1.0 + target.abs()));
        let ns: Complex64 = numeric(c).iter().sum();
        worst_numeric = worst_numeric.max((ns - target).norm() / (1.0 + target.abs()));
    }
    outcome(
        worst <= 1e-9 && worst_numeric <= 1e-9,
        format!(
            "{} configs, analytic Σλ rel. error = {worst:.3e}, numeric = {worst_numeric:.3e} (tol 1e-9)",
            corpus.len()
        ),
    )
}

fn ac6_phase_mixing() -> Outcome {
    let kappa = 1.0;
    let numeric_mixed = |c: &SystemConfig| {
        let labels: Vec<_> = numeric(c)
            .iter()
            .map(|z| classify(*z, BOUNDARY_TOL))
            .collect();
        labels.contains(&PhaseLabel::Symmetric) && labels.contains(&PhaseLabel::Broken)
    };
    let mut two_mixed = 0;
    for k in 0..100 {
        let g = 5.0 * k as f64 / 99.0;
        let c = SystemConfig::new(2, 0.0, kappa, g).unwrap();
        if spectrum_n_channel(&c).unwrap().is_mixed() || numeric_mixed(&c) {
            two_mixed += 1;
        }
    }
    let mut missing = Vec::new();
    for n in (4..=20).step_by(2) {
        let gs = n as f64 * kappa / 2.0;
        for k in 1..=100 {
            let g = gs * k as f64 / 101.0;
            let c = SystemConfig::new(n, 0.0, kappa, g).unwrap();
            if !(spectrum_n_channel(&c).unwrap().is_mixed() && numeric_mixed(&c)) {
                missing.push((n, g));
            }
        }
    }
    outcome(
        two_mixed == 0 && missing.is_empty(),
        format!(
            "N=2: {two_mixed}/100 mixed (want 0); N=4..20: {}/900 mixed (want 900)",
            900 - missing.len()
        ),
    )
}

fn ac7_boundary() -> Outcome {
    let curve = boundary_curve(2, 20, 1.0).unwrap();
    let exact = curve.len() == 10 && curve.iter().all(|&(n, g)| g == n as f64 / 2.0);
    let monotone = curve.windows(2).all(|w| w[1].1 > w[0].1);
    let mut flips = true;
    for &(n, gs) in &curve {
        let below = SystemConfig::new(n, 0.0, 1.0, gs - 1e-6).unwrap();
        let above = SystemConfig::new(n, 0.0, 1.0, gs + 1e-6).unwrap();
        flips &=
            pair_phases(&spectrum_n_channel(&below).unwrap(), &below) == [PhaseLabel::Symmetric; 2];
        flips &=
            pair_phases(&spectrum_n_channel(&above).unwrap(), &above) == [PhaseLabel::Broken; 2];
        flips &= cell(n, gs - 1e-6, 1.0).unwrap().phase == PhaseLabel::Symmetric;
        flips &= cell(n, gs + 1e-6, 1.0).unwrap().phase == PhaseLabel::Broken;
        flips &= cell(n, gs, 1.0).unwrap().phase == PhaseLabel::Exceptional;
    }
    outcome(
        exact && monotone && flips,
        format!(
            "γ* = N/2 exact {}; flips at γ*±1e-6 {}; γ* increasing {}",
            ok(exact),
            ok(flips),
            ok(monotone)
        ),
    )
}

/// Closed-form `e^{−iMt}·a₀` for `N = 2`: with `B = M − ωI`, `B² = (κ² − γ²)I`.
fn exact_two_channel(c: &SystemConfig, a0: &[Complex64], t: f64) -> Vec<Complex64> {
    let i = Complex64::new(0.0, 1.0);
    let s = Complex64::new(c.kappa * c.kappa - c.gamma * c.gamma, 0.0).sqrt();
    let cos = (s * t).cos();
    let sinc = if s.norm() == 0.0 {
        Complex64::new(t, 0.0)
    } else {
        (s * t).sin() / s
    };
    let b = [
        [Complex64::new(0.0, c.gamma), Complex64::new(c.kappa, 0.0)],
        [Complex64::new(c.kappa, 0.0), Complex64::new(0.0, -c.gamma)],
    ];
    let phase = (-i * c.omega * t).exp();
    (0..2)
        .map(|r| {
            let ba = b[r][0] * a0[0] + b[r][1] * a0[1];
            phase * (cos * a0[r] - i * sinc * ba)
        })
        .collect()
}

fn ac8_dynamics() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, gamma, t_end) in [(2, 2.0, 10.0), (4, 1.0, 12.0), (6, 2.0, 12.0)] {
        let c = SystemConfig::new(n, 0.0, 1.0, gamma).unwrap();
        let dt = default_dt(&c);
        let steps = (t_end / dt).round() as usize;
        let traj = evolve(&c, &default_initial(n), dt, steps, 10).unwrap();
        let rate = growth_rate(&traj, 0.5).unwrap();
        let predicted = 2.0 * spectrum_n_channel(&c).unwrap().max_imag();
        let rel = (rate - predicted).abs() / predicted;
        pass &= rel <= 0.01;
        lines.push(format!("N={n} γ={gamma}: {rate:.5} vs {predicted:.5}"));
    }

    let herm = SystemConfig::new(6, 0.4, 1.0, 0.0).unwrap();
    let fro = build_pt_matrix(&herm).unwrap().frobenius_norm();
    let traj = evolve(&herm, &default_initial(6), 1e-3 / fro, 10_000, 10_000).unwrap();
    let drift = (traj.last().intensity() - 1.0).abs();
    pass &= drift <= 1e-7;

    let c2 = SystemConfig::new(2, 0.5, 1.0, 0.5).unwrap();
    let a0 = vec![Complex64::new(0.8, 0.1), Complex64::new(-0.3, 0.5)];
    let t = 2.0;
    let err = |steps: usize| {
        let traj = evolve(
            &c2,
            &ModeState::new(a0.clone(), 0.0),
            t / steps as f64,
            steps,
            steps,
        )
        .unwrap();
        let exact = exact_two_channel(&c2, &a0, t);
        traj.last()
            .amplitudes
            .iter()
            .zip(&exact)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let ratio = err(20) / err(40);
    pass &= (12.0..=20.0).contains(&ratio);

    outcome(
        pass,
        format!(
            "{}; Hermitian drift {drift:.2e} (tol 1e-7); RK4 halving ratio {ratio:.2} (want 12..20)",
            lines.join(", ")
        ),
    )
}

fn ac9_permutation() -> Outcome {
    let mut worst = 0.0_f64;
    for n in [4, 8, 12] {
        let alt =
            random_configs(6, &[n], 10, &ParamRanges::default(), Pattern::Alternating).unwrap();
        for c in alt {
            let blocked = SystemConfig {
                pattern: Pattern::Blocked,
                ..c
            };
            let d = max_matched_deviation(&numeric(&c), &numeric(&blocked)).unwrap();
            worst = worst.max(d);
        }
    }
    outcome(
        worst <= 1e-10,
        format!("N ∈ {{4, 8, 12}} x 10, max |Δλ| = {worst:.3e} (tol 1e-10)"),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);
    let criteria: [Criterion; 9] = [
        (
            "AC1 two-channel spectrum",
            ac1_two_channel,
            Some(Duration::from_secs(1)),
        ),
        (
            "AC2 four-channel spectrum",
            ac2_four_channel,
            Some(Duration::from_secs(1)),
        ),
        (
            "AC3 N-channel spectrum",
            ac3_n_channel,
            Some(Duration::from_secs(30)),
        ),
        (
            "AC4 characteristic polynomial",
            ac4_char_poly,
            Some(Duration::from_secs(5)),
        ),
        ("AC5 trace identity", ac5_trace, None),
        ("AC6 phase mixing", ac6_phase_mixing, None),
        ("AC7 phase boundary", ac7_boundary, None),
        ("AC8 dynamics", ac8_dynamics, Some(Duration::from_secs(10))),
        ("AC9 permutation similarity", ac9_permutation, None),
    ];
    println!();
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = budget.is_none_or(|b| elapsed <= b);
        let passed = out.passed && in_time;
        let budget_note = budget.map_or(String::new(), |b| {
            format!(" / budget {:.0}s", b.as_secs_f64())
        });
        println!(
            "[{}] {name}: {} ({:.3}s{budget_note})",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
        );
        if !passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
