//! Eigenvalues with multiplicity and phase labels.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Phase of a single eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseLabel {
    /// Real eigenvalue.
    Symmetric,
    /// Eigenvalue with a nonzero imaginary part.
    Broken,
    /// Two eigenvalues coalescing at the symmetry-breaking threshold.
    Exceptional,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::Symmetric => "symmetric",
            PhaseLabel::Broken => "broken",
            PhaseLabel::Exceptional => "exceptional",
        }
    }
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Default relative tolerance for [`classify`].
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Labels a single eigenvalue: symmetric when
/// `|Im| ≤ boundary_tol·max(1, |value|)`, broken otherwise.
///
/// Never returns [`PhaseLabel::Exceptional`]; only callers that know the
/// discriminant vanishes can assign that.
pub fn classify(value: Complex64, boundary_tol: f64) -> PhaseLabel {
    if value.im.abs() <= boundary_tol * value.norm().max(1.0) {
        PhaseLabel::Symmetric
    } else {
        PhaseLabel::Broken
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
    pub phase: PhaseLabel,
}

/// Lexicographic `(Re, Im)` order.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sorted list of distinct eigenvalues whose multiplicities sum to `total`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<Eigenvalue>,
    total: usize,
}

impl Spectrum {
    /// Sorts the entries by `(Re, Im)` and drops zero-multiplicity ones.
    pub fn new(mut eigenvalues: Vec<Eigenvalue>) -> Self {
        eigenvalues.retain(|e| e.multiplicity > 0);
        eigenvalues.sort_by(|a, b| cmp_complex(&a.value, &b.value));
        let total = eigenvalues.iter().map(|e| e.multiplicity).sum();
        Spectrum { eigenvalues, total }
    }

    pub fn eigenvalues(&self) -> &[Eigenvalue] {
        &self.eigenvalues
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Every eigenvalue repeated by its multiplicity, in sorted order.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    /// Sum of the eigenvalues counted with multiplicity.
    pub fn sum(&self) -> Complex64 {
        self.eigenvalues
            .iter()
            .map(|e| e.value * e.multiplicity as f64)
            .sum()
    }

    /// Multiplicities in sorted-value order.
    pub fn multiplicities(&self) -> Vec<usize> {
        self.eigenvalues.iter().map(|e| e.multiplicity).collect()
    }

    pub fn has_phase(&self, phase: PhaseLabel) -> bool {
        self.eigenvalues.iter().any(|e| e.phase == phase)
    }

    /// True when real and complex eigenvalues coexist.
    pub fn is_mixed(&self) -> bool {
        self.has_phase(PhaseLabel::Broken)
            && (self.has_phase(PhaseLabel::Symmetric) || self.has_phase(PhaseLabel::Exceptional))
    }

    pub fn max_imag(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|e| e.value.im)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Largest `|a_i − b_π(i)|` over a one-to-one pairing `π` of two eigenvalue
/// lists.
///
/// Pairs are formed greedily, closest first. A plain lexicographic sort is
/// not enough to pair numeric and exact values: complex-conjugate partners
/// share a real part, so rounding noise in `Re` can swap their order.
/// Returns `None` when the lengths differ.
pub fn max_matched_deviation(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)).then(p.2.cmp(&q.2)));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut matched = 0;
    let mut worst = 0.0_f64;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    Some(worst)
}
