//! The lower-bound expression `L_{m,v}` from the randomized k-DARP argument
//! of Fink, Krumke and Westphal, evaluated as printed, with its claimed and
//! actual limits as `m` grows.
//!
//! With `e = (m + 1) / (2 - m)` the terms `v^e * v` tend to 1, so after
//! dividing by `m^2` both numerator and denominator vanish. The next order
//! gives the actual limit `(3 + 4 k |ln v|) / (1 + 2 k |ln v|)`, which lies
//! strictly between 2 and 3 for `v` in `(0, 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limit claimed for the expression.
pub const CLAIMED_LIMIT: f64 = 2.0;

fn check(k: u32, v: f64) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be >= 1".into()));
    }
    if !(v > 0.0 && v <= 1.0) {
        return Err(Error::InvalidParameter(format!("v must lie in (0, 1], got {v}")));
    }
    Ok(())
}

/// `L_{m,v}` exactly as printed.
pub fn flaw_value(k: u32, m: f64, v: f64) -> Result<f64> {
    check(k, v)?;
    if m.is_nan() || m <= 0.0 || m == 2.0 {
        return Err(Error::InvalidParameter(format!(
            "m must be positive and not 2, got {m}"
        )));
    }
    let k = k as f64;
    let p = v.powf((m + 1.0) / (2.0 - m));
    let num = 3.0 * m - 4.0 * k * m - 4.0 * k * m * m + p * (3.0 + (4.0 * k * m * m + 4.0 * k * m + 6.0 * m + 6.0) * v);
    let den =
        -4.0 - m - 2.0 * k * m - 2.0 * k * m * m + p * (3.0 + (2.0 * k * m * m + 2.0 * k * m + 4.0 * m + 4.0) * v);
    if den == 0.0 {
        return Err(Error::InvalidParameter(format!(
            "denominator vanishes at m = {m}, v = {v}"
        )));
    }
    Ok(num / den)
}

/// `(3 + 4 k |ln v|) / (1 + 2 k |ln v|)`; equals 3 at `v = 1`.
pub fn flaw_limit(k: u32, v: f64) -> Result<f64> {
    check(k, v)?;
    let l = v.ln().abs();
    let k = k as f64;
    Ok((3.0 + 4.0 * k * l) / (1.0 + 2.0 * k * l))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlawRow {
    pub k: u32,
    pub v: f64,
    pub m: f64,
    pub value: f64,
    pub claimed_limit: f64,
    pub limit: f64,
    /// `|value - claimed_limit|`.
    pub distance_to_claim: f64,
}

/// One row per `(k, v, m)`.
pub fn flaw_table(ks: &[u32], vs: &[f64], ms: &[f64]) -> Result<Vec<FlawRow>> {
    let mut rows = Vec::new();
    for &k in ks {
        for &v in vs {
            let limit = flaw_limit(k, v)?;
            for &m in ms {
                let value = flaw_value(k, m, v)?;
                rows.push(FlawRow {
                    k,
                    v,
                    m,
                    value,
                    claimed_limit: CLAIMED_LIMIT,
                    limit,
                    distance_to_claim: (value - CLAIMED_LIMIT).abs(),
                });
            }
        }
    }
    Ok(rows)
}
