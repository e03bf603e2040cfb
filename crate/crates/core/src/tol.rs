//! Numerical tolerances shared by every module.
//!
//! The audit tolerance can be overridden at runtime with the `RESCHED_TOL`
//! environment variable (a positive float, e.g. `RESCHED_TOL=1e-8`).

use std::sync::OnceLock;

/// Absolute tolerance for time and cost comparisons.
pub const ABS_TOL: f64 = 1e-9;
/// Relative tolerance for time and cost comparisons.
pub const REL_TOL: f64 = 1e-9;
/// Relative band inside which two `val` values are treated as a tie by the
/// oracle. Kept well below `REL_TOL` so a tie-broken minimizer still passes
/// every audit check at `REL_TOL`.
pub const TIE_REL: f64 = 1e-12;

/// Audit tolerance, `RESCHED_TOL` if set and valid, else [`REL_TOL`].
pub fn audit_tolerance() -> f64 {
    static TOL: OnceLock<f64> = OnceLock::new();
    *TOL.get_or_init(|| {
        std::env::var("RESCHED_TOL")
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .unwrap_or(REL_TOL)
    })
}

/// `a <= b` up to the combined absolute/relative tolerance.
pub fn approx_le(a: f64, b: f64) -> bool {
    a <= b + ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

/// Relative difference `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

/// Kahan-compensated sum.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut carry = 0.0;
    for v in values {
        let y = v - carry;
        let t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut v = vec![1.0];
        v.extend(std::iter::repeat_n(1e-16, 10_000));
        let s = kahan_sum(v);
        assert!((s - (1.0 + 1e-12)).abs() < 1e-15);
    }

    #[test]
    fn approx_le_accepts_rounding() {
        assert!(approx_le(1.0 + 1e-12, 1.0));
        assert!(!approx_le(1.0 + 1e-6, 1.0));
    }
}
