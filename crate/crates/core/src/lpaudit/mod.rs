//! Factor-revealing LP audit: the primal built from DISC's sub-phase grid,
//! the closed-form dual, a small simplex for the primal optimum, and LP text
//! export.

pub mod dual;
pub mod lpfile;
pub mod primal;
pub mod simplex;

use serde::{Deserialize, Serialize};

pub use dual::{build_dual, dual_objective, expected_dual_objective, verify_dual, DualReport, DualSolution};
pub use lpfile::{export_lp, parse_lp, primal_to_string, read_lp, LpModel};
pub use primal::{build_primal, check_primal_point, Family, PrimalCheck, PrimalLp, VarKind};

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::mimic::PhaseGrid;

/// Largest `Q` accepted by [`solve_primal`].
pub const MAX_SOLVE_Q: usize = 6;
/// Largest `Q` accepted by the exact-rational mode.
pub const MAX_EXACT_Q: usize = 6;

/// Arithmetic used by [`solve_primal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Arithmetic {
    Float,
    Rational,
}

/// Optimum of the primal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalOptimum {
    pub value: f64,
    pub arithmetic: Arithmetic,
    pub pivots: usize,
}

/// `P*` by dense simplex with Bland's rule.
pub fn solve_primal(lp: &PrimalLp, arithmetic: Arithmetic) -> Result<PrimalOptimum> {
    let limit = match arithmetic {
        Arithmetic::Float => MAX_SOLVE_Q,
        Arithmetic::Rational => MAX_EXACT_Q,
    };
    if lp.q_max > limit {
        return Err(Error::TooLarge(format!(
            "Q = {} exceeds {limit} for {arithmetic:?} simplex",
            lp.q_max
        )));
    }
    let n = lp.variables.len();
    let a: Vec<Vec<f64>> = lp
        .rows
        .iter()
        .map(|r| {
            let mut dense = vec![0.0; n];
            for &(i, c) in &r.coeffs {
                dense[i] = c;
            }
            dense
        })
        .collect();
    let b: Vec<f64> = lp.rows.iter().map(|r| r.rhs).collect();
    match arithmetic {
        Arithmetic::Float => {
            let s = simplex::maximize(&lp.objective, &a, &b)?;
            Ok(PrimalOptimum {
                value: s.value,
                arithmetic,
                pivots: s.pivots,
            })
        }
        Arithmetic::Rational => {
            let s = simplex::maximize_exact(&lp.objective, &a, &b)?;
            Ok(PrimalOptimum {
                value: simplex::Scalar::to_f64(&s.value),
                arithmetic,
                pivots: s.pivots,
            })
        }
    }
}

type OptimumKey = (u64, usize, u64, usize, Arithmetic);

/// `P*` for DISC(gamma, M, beta) completing in phase `k`, memoized.
///
/// Every `eta` coefficient multiplies a weight variable and every right-hand
/// side is 0 or 1, so rescaling the weights by `min(I)` maps the LP for one
/// instance onto the LP for another: `P*` does not depend on `min(I)`. The
/// LP is built on the unit grid.
pub fn reference_optimum(
    gamma: f64,
    m_count: usize,
    beta: f64,
    k: usize,
    arithmetic: Arithmetic,
) -> Result<PrimalOptimum> {
    static CACHE: OnceLock<Mutex<HashMap<OptimumKey, PrimalOptimum>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (gamma.to_bits(), m_count, beta.to_bits(), k, arithmetic);
    if let Some(hit) = cache.lock().expect("optimum cache poisoned").get(&key) {
        return Ok(hit.clone());
    }
    let grid = PhaseGrid::new(gamma, m_count, beta, 1.0)?;
    let optimum = solve_primal(&build_primal(&grid, k)?, arithmetic)?;
    cache
        .lock()
        .expect("optimum cache poisoned")
        .insert(key, optimum.clone());
    Ok(optimum)
}
