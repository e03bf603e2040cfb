//! The factor-revealing primal LP and the evaluation of extracted run data
//! against it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mimic::{FreshStalePartition, PhaseGrid};
use crate::tol::kahan_sum;

/// Which of the four variable blocks a column belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarKind {
    WeightFresh,
    WeightStale,
    CostFresh,
    CostStale,
}

impl VarKind {
    pub const ALL: [VarKind; 4] = [
        VarKind::WeightFresh,
        VarKind::WeightStale,
        VarKind::CostFresh,
        VarKind::CostStale,
    ];

    pub fn prefix(self) -> &'static str {
        match self {
            VarKind::WeightFresh => "wF",
            VarKind::WeightStale => "wS",
            VarKind::CostFresh => "gF",
            VarKind::CostStale => "gS",
        }
    }
}

/// Constraint families of the primal, numbered as in the analysis (5..=11).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `sum_j g_qj <= 1` on the last block.
    OptRel,
    /// Stale weight bounded by earlier fresh weight.
    WeightStale,
    /// Earlier fresh weight bounded by stale weight on the last block.
    WeightLast,
    /// Exchange argument between schedules `q < l`.
    Mix,
    /// `eta_{j-1} wS_qj <= gS_qj`.
    StaleLower,
    /// `gF_qj <= eta_j wF_qj`.
    FreshUpper,
    /// `eta_{j-1} wF_qj <= gF_qj`.
    FreshLower,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::OptRel,
        Family::WeightStale,
        Family::WeightLast,
        Family::Mix,
        Family::StaleLower,
        Family::FreshUpper,
        Family::FreshLower,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 5
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::OptRel => "opt_rel",
            Family::WeightStale => "wrel_stale",
            Family::WeightLast => "wrel_last",
            Family::Mix => "mix",
            Family::StaleLower => "stale_lb",
            Family::FreshUpper => "fresh_ub",
            Family::FreshLower => "fresh_lb",
        }
    }
}

/// One `<=` row. `index` is `(q, 0)` for per-phase rows, `(q, l)` for mix
/// rows and `(q, j)` for per-cell rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    pub family: Family,
    pub index: (usize, usize),
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// The primal LP for `Q = K M + M - 1`. Maximization, every row `<=`, all
/// variables non-negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalLp {
    pub q_max: usize,
    pub m_count: usize,
    pub k: usize,
    /// `eta_{-1}, ..., eta_Q`.
    pub etas: Vec<f64>,
    pub variables: Vec<String>,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

fn tri(q: usize) -> usize {
    q * (q + 1) / 2
}

impl PrimalLp {
    /// Number of `(q, j)` cells per block.
    pub fn cells(&self) -> usize {
        tri(self.q_max + 1)
    }

    /// Column of the variable of `kind` at `(q, j)`.
    pub fn var(&self, kind: VarKind, q: usize, j: usize) -> usize {
        debug_assert!(j <= q && q <= self.q_max);
        kind as usize * self.cells() + tri(q) + j
    }

    /// `eta_i` for `-1 <= i <= Q`.
    pub fn eta(&self, i: i64) -> f64 {
        self.etas[(i + 1) as usize]
    }

    pub fn rows_of(&self, family: Family) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(move |r| r.family == family)
    }

    /// Values of every column taken from a partition (optionally divided by `scale`).
    pub fn point(&self, part: &FreshStalePartition) -> Result<Vec<f64>> {
        if part.q_max != self.q_max || part.m_count != self.m_count {
            return Err(Error::Inconsistent(format!(
                "partition has Q = {}, M = {}; LP has Q = {}, M = {}",
                part.q_max, part.m_count, self.q_max, self.m_count
            )));
        }
        let mut x = vec![0.0; 4 * self.cells()];
        for q in 0..=self.q_max {
            for j in 0..=q {
                x[self.var(VarKind::WeightFresh, q, j)] = part.w_fresh[q][j];
                x[self.var(VarKind::WeightStale, q, j)] = part.w_stale[q][j];
                x[self.var(VarKind::CostFresh, q, j)] = part.g_fresh[q][j];
                x[self.var(VarKind::CostStale, q, j)] = part.g_stale[q][j];
            }
        }
        Ok(x)
    }

    pub fn objective_at(&self, x: &[f64]) -> f64 {
        kahan_sum(self.objective.iter().zip(x).map(|(c, v)| c * v))
    }
}

impl Row {
    pub fn lhs(&self, x: &[f64]) -> f64 {
        kahan_sum(self.coeffs.iter().map(|&(i, c)| c * x[i]))
    }

    /// `max(1, sum |a_i x_i|, |rhs|)`.
    pub fn scale(&self, x: &[f64]) -> f64 {
        let mag = kahan_sum(self.coeffs.iter().map(|&(i, c)| (c * x[i]).abs()));
        mag.max(self.rhs.abs()).max(1.0)
    }
}

struct RowBuilder<'a> {
    lp: &'a PrimalLp,
    coeffs: Vec<(usize, f64)>,
}

impl<'a> RowBuilder<'a> {
    fn new(lp: &'a PrimalLp) -> Self {
        RowBuilder { lp, coeffs: Vec::new() }
    }

    fn add(&mut self, kind: VarKind, q: usize, j: usize, c: f64) {
        let col = self.lp.var(kind, q, j);
        match self.coeffs.iter_mut().find(|(i, _)| *i == col) {
            Some(entry) => entry.1 += c,
            None => self.coeffs.push((col, c)),
        }
    }

    fn finish(mut self, name: String, family: Family, index: (usize, usize), rhs: f64) -> Row {
        self.coeffs.retain(|&(_, c)| c != 0.0);
        self.coeffs.sort_by_key(|&(i, _)| i);
        Row {
            name,
            family,
            index,
            coeffs: self.coeffs,
            rhs,
        }
    }
}

/// Builds the primal for DISC on `grid` with completion phase `k`.
pub fn build_primal(grid: &PhaseGrid, k: usize) -> Result<PrimalLp> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    let m = grid.m_count();
    let q_max = k * m + m - 1;
    let mut lp = PrimalLp {
        q_max,
        m_count: m,
        k,
        etas: grid.etas(q_max),
        variables: Vec::new(),
        objective: Vec::new(),
        rows: Vec::new(),
    };
    let n = 4 * lp.cells();
    lp.variables = vec![String::new(); n];
    lp.objective = vec![0.0; n];
    for kind in VarKind::ALL {
        for q in 0..=q_max {
            for j in 0..=q {
                let col = lp.var(kind, q, j);
                lp.variables[col] = format!("{}_{q}_{j}", kind.prefix());
            }
        }
    }
    for q in 0..=q_max {
        for j in 0..=q {
            let (w, g) = (lp.var(VarKind::WeightFresh, q, j), lp.var(VarKind::CostFresh, q, j));
            lp.objective[w] = lp.eta(q as i64);
            lp.objective[g] = 1.0;
        }
    }

    let last = q_max + 1 - m;
    let mut rows = Vec::new();
    for q in last..=q_max {
        let mut b = RowBuilder::new(&lp);
        for j in 0..=q {
            b.add(VarKind::CostFresh, q, j, 1.0);
            b.add(VarKind::CostStale, q, j, 1.0);
        }
        rows.push(b.finish(format!("opt_rel_q{q}"), Family::OptRel, (q, 0), 1.0));
    }
    let earlier_fresh = |b: &mut RowBuilder, q: usize, sign: f64| {
        for l in (q % m..q).step_by(m) {
            for j in 0..=l {
                b.add(VarKind::WeightFresh, l, j, sign);
            }
        }
    };
    for q in 0..last {
        let mut b = RowBuilder::new(&lp);
        for j in 0..=q {
            b.add(VarKind::WeightStale, q, j, 1.0);
        }
        earlier_fresh(&mut b, q, -1.0);
        rows.push(b.finish(format!("wrel_stale_q{q}"), Family::WeightStale, (q, 0), 0.0));
    }
    for q in last..=q_max {
        let mut b = RowBuilder::new(&lp);
        earlier_fresh(&mut b, q, 1.0);
        for j in 0..=q {
            b.add(VarKind::WeightStale, q, j, -1.0);
        }
        rows.push(b.finish(format!("wrel_last_q{q}"), Family::WeightLast, (q, 0), 0.0));
    }
    for q in 0..=q_max {
        let eta = lp.eta(q as i64);
        for l in q + 1..=q_max {
            let mut b = RowBuilder::new(&lp);
            for j in 0..=q {
                b.add(VarKind::CostFresh, q, j, 1.0);
                b.add(VarKind::CostStale, q, j, 1.0);
                b.add(VarKind::CostFresh, l, j, -1.0);
                b.add(VarKind::CostStale, l, j, -1.0);
                b.add(VarKind::WeightFresh, l, j, eta);
                b.add(VarKind::WeightStale, l, j, eta);
                b.add(VarKind::WeightFresh, q, j, -eta);
                b.add(VarKind::WeightStale, q, j, -eta);
            }
            rows.push(b.finish(format!("mix_q{q}_l{l}"), Family::Mix, (q, l), 0.0));
        }
    }
    let cell_rows: [(Family, VarKind, VarKind, bool); 3] = [
        (Family::StaleLower, VarKind::WeightStale, VarKind::CostStale, false),
        (Family::FreshUpper, VarKind::WeightFresh, VarKind::CostFresh, true),
        (Family::FreshLower, VarKind::WeightFresh, VarKind::CostFresh, false),
    ];
    for (family, w, g, upper) in cell_rows {
        for q in 0..=q_max {
            for j in 0..=q {
                let mut b = RowBuilder::new(&lp);
                if upper {
                    b.add(g, q, j, 1.0);
                    b.add(w, q, j, -lp.eta(j as i64));
                } else {
                    b.add(w, q, j, lp.eta(j as i64 - 1));
                    b.add(g, q, j, -1.0);
                }
                rows.push(b.finish(format!("{}_q{q}_j{j}", family.label()), family, (q, j), 0.0));
            }
        }
    }
    lp.rows = rows;
    Ok(lp)
}

/// Worst row of one family at a given point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCheck {
    pub family: Family,
    pub rows: usize,
    /// Largest `(lhs - rhs) / scale`, clamped below at the most slack row.
    pub max_violation: f64,
    pub worst_row: Option<String>,
    /// Rows holding with equality at the tolerance.
    pub tight_rows: usize,
}

/// Evaluation of the primal constraints at a point extracted from a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrimalCheck {
    pub tolerance: f64,
    pub families: Vec<FamilyCheck>,
    pub objective: f64,
    /// `objective / M`.
    pub objective_over_m: f64,
    /// Divisor applied to every variable (`OPT` when normalized).
    pub normalizer: f64,
    pub feasible: bool,
}

impl PrimalCheck {
    pub fn family(&self, family: Family) -> &FamilyCheck {
        self.families
            .iter()
            .find(|f| f.family == family)
            .expect("every family is reported")
    }
}

/// Evaluates every row at the partition's point, divided by `normalizer`
/// when given (pass `OPT` to make the last-block rows read `<= 1`).
pub fn check_primal_point(
    part: &FreshStalePartition,
    lp: &PrimalLp,
    normalizer: Option<f64>,
    tol: f64,
) -> Result<PrimalCheck> {
    let scale = normalizer.unwrap_or(1.0);
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "normalizer must be positive, got {scale}"
        )));
    }
    let x: Vec<f64> = lp.point(part)?.into_iter().map(|v| v / scale).collect();
    let families: Vec<FamilyCheck> = Family::ALL
        .iter()
        .map(|&family| {
            let mut check = FamilyCheck {
                family,
                rows: 0,
                max_violation: f64::NEG_INFINITY,
                worst_row: None,
                tight_rows: 0,
            };
            for row in lp.rows_of(family) {
                let v = (row.lhs(&x) - row.rhs) / row.scale(&x);
                check.rows += 1;
                if v.abs() <= tol {
                    check.tight_rows += 1;
                }
                if v > check.max_violation {
                    check.max_violation = v;
                    check.worst_row = Some(row.name.clone());
                }
            }
            check
        })
        .collect();
    let feasible = families.iter().all(|f| f.max_violation <= tol);
    let objective = lp.objective_at(&x);
    Ok(PrimalCheck {
        tolerance: tol,
        families,
        objective,
        objective_over_m: objective / lp.m_count as f64,
        normalizer: scale,
        feasible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(lp: &PrimalLp, f: Family) -> usize {
        lp.rows_of(f).count()
    }

    #[test]
    fn row_counts_for_single_offset_single_phase() {
        let grid = PhaseGrid::new(1.0, 1, 1.0, 1.0).unwrap();
        let lp = build_primal(&grid, 1).unwrap();
        assert_eq!(lp.q_max, 1);
        let counts: Vec<usize> = Family::ALL.iter().map(|&f| count(&lp, f)).collect();
        assert_eq!(counts, vec![1, 1, 1, 1, 3, 3, 3]);
        assert_eq!(lp.variables.len(), 12);
        assert!(lp.rows.iter().any(|r| r.name == "opt_rel_q1"));
        assert!(lp.rows.iter().any(|r| r.name == "mix_q0_l1"));
    }

    #[test]
    fn row_counts_follow_index_ranges() {
        for m in 1..=3 {
            for k in 1..=3 {
                let grid = PhaseGrid::new(0.5, m, 1.0 / m as f64, 2.0).unwrap();
                let lp = build_primal(&grid, k).unwrap();
                let q = k * m + m - 1;
                let cells = (q + 1) * (q + 2) / 2;
                assert_eq!(count(&lp, Family::OptRel), m);
                assert_eq!(count(&lp, Family::WeightStale), q + 1 - m);
                assert_eq!(count(&lp, Family::WeightLast), m);
                assert_eq!(count(&lp, Family::Mix), q * (q + 1) / 2);
                for f in [Family::StaleLower, Family::FreshUpper, Family::FreshLower] {
                    assert_eq!(count(&lp, f), cells);
                }
            }
        }
    }

    #[test]
    fn zero_phases_rejected() {
        let grid = PhaseGrid::new(1.0, 1, 1.0, 1.0).unwrap();
        assert!(matches!(build_primal(&grid, 0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn objective_coefficients() {
        let grid = PhaseGrid::new(1.0, 2, 0.5, 1.0).unwrap();
        let lp = build_primal(&grid, 1).unwrap();
        for q in 0..=lp.q_max {
            for j in 0..=q {
                assert_eq!(lp.objective[lp.var(VarKind::CostFresh, q, j)], 1.0);
                assert_eq!(lp.objective[lp.var(VarKind::CostStale, q, j)], 0.0);
                assert_eq!(lp.objective[lp.var(VarKind::WeightStale, q, j)], 0.0);
                assert_eq!(lp.objective[lp.var(VarKind::WeightFresh, q, j)], grid.eta(q as i64));
            }
        }
    }
}
