//! Reproducible float formatting for text, CSV and JSON output.

/// Rounds to 15 significant decimal digits.
pub fn round_sig15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        // normalises -0.0
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.14e}", x).parse().unwrap_or(x)
}

/// Formats with at most 15 significant digits in shortest round-trip form;
/// exponent notation outside `1e-5 ≤ |x| < 1e15`.
pub fn sig15(x: f64) -> String {
    let r = round_sig15(x);
    let a = r.abs();
    if r == 0.0 || !r.is_finite() || (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}
