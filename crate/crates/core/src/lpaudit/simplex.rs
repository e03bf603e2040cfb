//! Dense tableau simplex with Bland's rule for `max c x, A x <= b, x >= 0`
//! with `b >= 0`, over `f64` or exact rationals.

use std::fmt::Debug;

use num::{BigRational, Signed, ToPrimitive};

use crate::error::{Error, Result};

/// Ordered field the tableau works over.
pub trait Scalar: Clone + Debug + PartialOrd + num::Num + Signed {
    fn from_f64(x: f64) -> Result<Self>;
    fn to_f64(&self) -> f64;
    /// `self > 0`, up to the arithmetic's noise floor.
    fn is_pos(&self) -> bool;
    /// Rounds noise to exact zero.
    fn snap(self) -> Self;
    /// Equality up to the noise floor, used for ratio-test ties.
    fn near(&self, other: &Self) -> bool;
}

/// Threshold for positive reduced costs and pivot elements.
const FLOAT_EPS: f64 = 1e-9;
/// Entries below this magnitude are treated as zero after a pivot.
const FLOAT_SNAP: f64 = 1e-12;

impl Scalar for f64 {
    fn from_f64(x: f64) -> Result<Self> {
        Ok(x)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_pos(&self) -> bool {
        *self > FLOAT_EPS
    }

    fn snap(self) -> Self {
        if self.abs() < FLOAT_SNAP {
            0.0
        } else {
            self
        }
    }

    fn near(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_SNAP * self.abs().max(other.abs()).max(1.0)
    }
}

impl Scalar for BigRational {
    fn from_f64(x: f64) -> Result<Self> {
        BigRational::from_float(x).ok_or_else(|| Error::InvalidParameter(format!("{x} has no exact rational form")))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn is_pos(&self) -> bool {
        self.is_positive()
    }

    fn snap(self) -> Self {
        self
    }

    fn near(&self, other: &Self) -> bool {
        self == other
    }
}

/// Optimal basic solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution<T> {
    pub value: T,
    pub x: Vec<T>,
    pub pivots: usize,
    /// Final basis: column `j < n` is structural, `n + i` is the slack of row `i`.
    pub basis: Vec<usize>,
}

/// Pivot budget; exceeding it reports [`Error::TooLarge`] instead of looping.
pub const PIVOT_LIMIT: usize = 50_000;

/// Solves `max c x` subject to `a x <= b`, `x >= 0`. Every `b_i` must be
/// non-negative so the slack basis is feasible.
pub fn maximize<T: Scalar>(c: &[T], a: &[Vec<T>], b: &[T]) -> Result<Solution<T>> {
    let (m, n) = (a.len(), c.len());
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidParameter("LP dimensions disagree".into()));
    }
    if b.iter().any(|v| v.is_negative()) {
        return Err(Error::InvalidParameter("right-hand sides must be non-negative".into()));
    }
    let width = n + m + 1;
    let mut tab: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .enumerate()
        .map(|(i, (row, bi))| {
            let mut t = row.clone();
            t.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
            t.push(bi.clone());
            t
        })
        .collect();
    // reduced costs; the last entry holds minus the objective
    let mut cost: Vec<T> = c.to_vec();
    cost.extend(std::iter::repeat_n(T::zero(), m + 1));
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0;
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_pos()) {
        let mut leave: Option<(usize, T)> = None;
        for (i, row) in tab.iter().enumerate() {
            if !row[enter].is_pos() {
                continue;
            }
            let ratio = row[width - 1].clone() / row[enter].clone();
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio.near(&lr) {
                        if basis[i] < basis[li] {
                            Some((i, ratio))
                        } else {
                            Some((li, lr))
                        }
                    } else if ratio < lr {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        let (r, _) = leave.ok_or(Error::Unbounded)?;
        let p = tab[r][enter].clone();
        for v in tab[r].iter_mut() {
            *v = v.clone() / p.clone();
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = (v.clone() - f.clone() * pv.clone()).snap();
                }
            }
        }
        let f = cost[enter].clone();
        for (v, pv) in cost.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *v = (v.clone() - f.clone() * pv.clone()).snap();
            }
        }
        basis[r] = enter;
        pivots += 1;
        if pivots > PIVOT_LIMIT {
            return Err(Error::TooLarge(format!("simplex exceeded {PIVOT_LIMIT} pivots")));
        }
    }
    let mut x = vec![T::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i][width - 1].clone();
        }
    }
    let value = -cost[width - 1].clone();
    Ok(Solution {
        value,
        x,
        pivots,
        basis,
    })
}

/// Converts an `f64` problem to exact rationals and solves it.
pub fn maximize_exact(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<Solution<BigRational>> {
    let conv = |v: &[f64]| v.iter().map(|&x| BigRational::from_f64(x)).collect::<Result<Vec<_>>>();
    let a = a.iter().map(|row| conv(row)).collect::<Result<Vec<_>>>()?;
    maximize(&conv(c)?, &a, &conv(b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let a = vec![vec![1.0, 0.0], vec![0.0, 2.0], vec![3.0, 2.0]];
        let s = maximize(&[3.0, 5.0], &a, &[4.0, 12.0, 18.0]).unwrap();
        assert!((s.value - 36.0).abs() < 1e-12);
        assert!((s.x[0] - 2.0).abs() < 1e-12 && (s.x[1] - 6.0).abs() < 1e-12);
        let e = maximize_exact(&[3.0, 5.0], &a, &[4.0, 12.0, 18.0]).unwrap();
        assert_eq!(e.value, BigRational::from_integer(36.into()));
        let mut basis = s.basis.clone();
        basis.sort_unstable();
        assert_eq!(basis, vec![0, 1, 2]);
    }

    #[test]
    fn unbounded_is_reported() {
        let a = vec![vec![1.0, -1.0]];
        assert!(matches!(maximize(&[0.0, 1.0], &a, &[1.0]), Err(Error::Unbounded)));
    }

    #[test]
    fn zero_objective_stays_at_origin() {
        let a = vec![vec![1.0, 1.0]];
        let s = maximize(&[0.0, 0.0], &a, &[0.0]).unwrap();
        assert_eq!(s.value, 0.0);
        assert_eq!(s.pivots, 0);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's example, which cycles under the largest-coefficient rule
        let a = vec![
            vec![0.25, -60.0, -0.04, 9.0],
            vec![0.5, -90.0, -0.02, 3.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        let c = [0.75, -150.0, 0.02, -6.0];
        let s = maximize(&c, &a, &[0.0, 0.0, 1.0]).unwrap();
        assert!((s.value - 0.05).abs() < 1e-12);
        let e = maximize_exact(&c, &a, &[0.0, 0.0, 1.0]).unwrap();
        assert!((Scalar::to_f64(&e.value) - 0.05).abs() < 1e-12);
    }
}
