//! The closed-form dual solution and its verifier.
//!
//! Dual variables pair with primal rows as follows: `xi` with the last-block
//! `opt_rel` rows, `C` with `wrel_stale`, `E` with `wrel_last`, `D_{l q}` with
//! `mix_q{q}_l{l}`, and `B`, `G`, `H` with the per-cell `stale_lb`, `fresh_ub`
//! and `fresh_lb` rows.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mimic::PhaseGrid;
use crate::tol::kahan_sum;

/// Full dual assignment for `Q = K M + M - 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSolution {
    pub gamma: f64,
    pub m_count: usize,
    pub k: usize,
    pub q_max: usize,
    pub delta: f64,
    /// `eta_i` for `i` from `-(M + 2)` to `Q + M`.
    pub etas: Vec<f64>,
    /// `xi_q` for `q` in the last block, starting at `Q - M + 1`.
    pub xi: Vec<f64>,
    pub b: Vec<Vec<f64>>,
    pub g: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    /// `C_q` for `0 <= q <= Q - M`.
    pub c: Vec<f64>,
    /// `E_q` for the last block.
    pub e: Vec<f64>,
    /// `D[q][l]` for `l < q`.
    pub d: Vec<Vec<f64>>,
}

impl DualSolution {
    fn eta_offset(&self) -> i64 {
        self.m_count as i64 + 2
    }

    pub fn eta(&self, i: i64) -> f64 {
        self.etas[(i + self.eta_offset()) as usize]
    }

    /// First index of the last block, `Q - M + 1`.
    pub fn last_start(&self) -> usize {
        self.q_max + 1 - self.m_count
    }

    pub fn in_last_block(&self, q: usize) -> bool {
        q >= self.last_start()
    }

    pub fn xi(&self, q: usize) -> f64 {
        self.xi[q - self.last_start()]
    }

    pub fn e(&self, q: usize) -> f64 {
        self.e[q - self.last_start()]
    }

    /// `Delta_k = sum_{i=0}^{k} delta^i`, zero for `k < 0`.
    pub fn delta_sum(&self, k: i64) -> f64 {
        delta_sum(self.delta, k)
    }

    /// `L_q = M K + (q mod M)`.
    pub fn l_of(&self, q: usize) -> usize {
        self.m_count * self.k + q % self.m_count
    }

    /// `S(q) = {q + M, q + 2M, ..., L_q - M}`.
    pub fn s_of(&self, q: usize) -> impl Iterator<Item = usize> {
        let end = self.l_of(q);
        (q + self.m_count..end).step_by(self.m_count)
    }

    /// `R_q = sum_{l=q+1}^{Q} D_{l q}`.
    pub fn r(&self, q: usize) -> f64 {
        kahan_sum((q + 1..=self.q_max).map(|l| self.d[l][q]))
    }

    /// `U_qj = R_q - sum_{l=j}^{q-1} D_{q l}`.
    pub fn u(&self, q: usize, j: usize) -> f64 {
        kahan_sum(std::iter::once(self.r(q)).chain((j..q).map(|l| -self.d[q][l])))
    }

    /// `V_qj = sum_{l=j}^{q-1} eta_l D_{q l} - eta_q R_q`.
    pub fn v(&self, q: usize, j: usize) -> f64 {
        let eta_q = self.eta(q as i64);
        let down = (q + 1..=self.q_max).map(|l| -eta_q * self.d[l][q]);
        kahan_sum((j..q).map(|l| self.eta(l as i64) * self.d[q][l]).chain(down))
    }

    /// `sum_q xi_q`.
    pub fn objective(&self) -> f64 {
        kahan_sum(self.xi.iter().copied())
    }
}

fn delta_sum(delta: f64, k: i64) -> f64 {
    kahan_sum((0..=k).map(|i| delta.powi(i as i32)))
}

/// `M + sum_{j=1}^{M} delta^j`.
pub fn expected_dual_objective(gamma: f64, m_count: usize) -> f64 {
    let alpha = 2.0 + gamma;
    m_count as f64 + kahan_sum((1..=m_count).map(|j| alpha.powf(j as f64 / m_count as f64)))
}

/// Builds the closed-form dual for `grid` and completion phase `k`.
pub fn build_dual(grid: &PhaseGrid, k: usize) -> Result<DualSolution> {
    if k == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    let m = grid.m_count();
    let q_max = k * m + m - 1;
    let last = q_max + 1 - m;
    let delta = grid.delta();
    let offset = m as i64 + 2;
    let etas: Vec<f64> = (-offset..=(q_max + m) as i64).map(|i| grid.eta(i)).collect();
    let eta = |i: i64| etas[(i + offset) as usize];
    let dsum = |i: i64| delta_sum(delta, i);

    let xi: Vec<f64> = (last..=q_max)
        .map(|q| 1.0 + delta.powi(q as i32 - last as i32 + 1))
        .collect();
    let xi_of = |q: usize| xi[q - last];
    let b: Vec<Vec<f64>> = (0..=q_max)
        .map(|q| {
            (0..=q)
                .map(|j| {
                    if j >= last {
                        xi_of(q)
                    } else if q == j {
                        delta * dsum(m as i64 - 1)
                    } else if q > j && q <= j + m {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let g: Vec<Vec<f64>> = (0..=q_max)
        .map(|q| {
            (0..=q)
                .map(|j| {
                    let (q, j) = (q as i64, j as i64);
                    if j >= last as i64 {
                        dsum(q - last as i64) - dsum(q - j)
                    } else if j + m as i64 <= q {
                        dsum(q - j - m as i64 - 1)
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect();
    let h = b
        .iter()
        .zip(&g)
        .map(|(br, gr)| br.iter().zip(gr).map(|(b, g)| b + g - 1.0).collect())
        .collect();
    let dm = delta.powi(m as i32);
    let c = (0..last)
        .map(|q| eta(q as i64 - m as i64 - 1) * (dm * delta + 1.0) * (dm - 1.0))
        .collect();
    let e = (last..=q_max)
        .map(|q| eta(q as i64 - m as i64 - 1) * (dm * delta + 1.0))
        .collect();
    let d = (0..=q_max)
        .map(|q| (0..q).map(|l| b[q][l + 1] - b[q][l]).collect())
        .collect();
    Ok(DualSolution {
        gamma: grid.gamma(),
        m_count: m,
        k,
        q_max,
        delta,
        etas,
        xi,
        b,
        g,
        h,
        c,
        e,
        d,
    })
}

/// One evaluated dual constraint (`lhs >= rhs`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    /// Family number, 13 to 20.
    pub family: u8,
    pub index: (usize, usize),
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub scale: f64,
}

impl ConstraintCheck {
    pub fn scaled_slack(&self) -> f64 {
        self.slack / self.scale
    }
}

/// Per-family summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualFamilySummary {
    pub family: u8,
    pub rows: usize,
    /// Smallest scaled slack; negative means violated.
    pub min_slack: f64,
    pub max_slack: f64,
    pub violations: usize,
    /// Every row holds with equality.
    pub tight: bool,
}

/// Numerical check of one helper identity over its index range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub cases: usize,
    /// Largest scaled error, or the most negative scaled value for inequalities.
    pub worst: f64,
    pub ok: bool,
}

/// Result of [`verify_dual`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualReport {
    pub gamma: f64,
    pub m_count: usize,
    pub k: usize,
    pub q_max: usize,
    pub tolerance: f64,
    pub families: Vec<DualFamilySummary>,
    pub checks: Vec<ConstraintCheck>,
    /// Entries below `-tolerance`, by variable name.
    pub negative_entries: Vec<String>,
    pub identities: Vec<IdentityCheck>,
    pub objective: f64,
    pub expected_objective: f64,
    pub feasible: bool,
}

/// Families proven to hold with equality.
pub const TIGHT_FAMILIES: [u8; 6] = [13, 14, 15, 16, 17, 19];

impl DualReport {
    pub fn family(&self, family: u8) -> Option<&DualFamilySummary> {
        self.families.iter().find(|f| f.family == family)
    }

    /// Every family in [`TIGHT_FAMILIES`] is tight.
    pub fn tight_families_hold(&self) -> bool {
        TIGHT_FAMILIES.iter().all(|&f| self.family(f).is_some_and(|s| s.tight))
    }

    pub fn identities_hold(&self) -> bool {
        self.identities.iter().all(|i| i.ok)
    }

    pub fn objective_rel_error(&self) -> f64 {
        (self.objective - self.expected_objective).abs() / self.expected_objective.abs().max(1.0)
    }

    /// Worst violation as `(family, (q, j), scaled slack)`.
    pub fn worst(&self) -> Option<(u8, (usize, usize), f64)> {
        self.checks
            .iter()
            .min_by(|a, b| a.scaled_slack().total_cmp(&b.scaled_slack()))
            .map(|c| (c.family, c.index, c.scaled_slack()))
    }
}

fn scale_of(terms: &[f64]) -> f64 {
    terms.iter().fold(1.0f64, |s, t| s.max(t.abs()))
}

fn constraint(family: u8, index: (usize, usize), terms: &[f64], rhs: f64) -> ConstraintCheck {
    let lhs = kahan_sum(terms.iter().copied());
    let scale = scale_of(terms).max(rhs.abs());
    ConstraintCheck {
        family,
        index,
        lhs,
        rhs,
        slack: lhs - rhs,
        scale,
    }
}

fn dual_constraints(dual: &DualSolution, q: usize, j: usize) -> [ConstraintCheck; 4] {
    let eta = |i: i64| dual.eta(i);
    let (u, v) = (dual.u(q, j), dual.v(q, j));
    let (b, g, h) = (dual.b[q][j], dual.g[q][j], dual.h[q][j]);
    let eta_q = eta(q as i64);
    let eta_j = eta(j as i64);
    let eta_jm = eta(j as i64 - 1);
    if dual.in_last_block(q) {
        let xi = dual.xi(q);
        [
            constraint(15, (q, j), &[u, g, -h, xi], 1.0),
            constraint(16, (q, j), &[u, -b, xi], 0.0),
            constraint(19, (q, j), &[v, -eta_j * g, eta_jm * h], eta_q),
            constraint(20, (q, j), &[v, eta_jm * b, -dual.e(q)], 0.0),
        ]
    } else {
        let s_sum = kahan_sum(dual.s_of(q).map(|l| dual.c[l]));
        [
            constraint(13, (q, j), &[u, g, -h], 1.0),
            constraint(14, (q, j), &[u, -b], 0.0),
            constraint(
                17,
                (q, j),
                &[v, eta_jm * h, -eta_j * g, dual.e(dual.l_of(q)), -s_sum],
                eta_q,
            ),
            constraint(18, (q, j), &[v, eta_jm * b, dual.c[q]], 0.0),
        ]
    }
}

struct IdentityAcc {
    name: &'static str,
    cases: usize,
    worst: f64,
    inequality: bool,
}

impl IdentityAcc {
    fn equality(name: &'static str) -> Self {
        IdentityAcc {
            name,
            cases: 0,
            worst: 0.0,
            inequality: false,
        }
    }

    fn at_least_zero(name: &'static str) -> Self {
        IdentityAcc {
            name,
            cases: 0,
            worst: f64::INFINITY,
            inequality: true,
        }
    }

    /// Records `lhs == rhs`, scaled by the magnitudes of `terms`.
    fn eq(&mut self, lhs: f64, rhs: f64, terms: &[f64]) {
        self.cases += 1;
        let scale = scale_of(terms).max(lhs.abs()).max(rhs.abs());
        self.worst = self.worst.max((lhs - rhs).abs() / scale);
    }

    /// Records `value >= 0`.
    fn nonneg(&mut self, value: f64, terms: &[f64]) {
        self.cases += 1;
        self.worst = self.worst.min(value / scale_of(terms));
    }

    fn finish(self, tol: f64) -> IdentityCheck {
        let worst = if self.cases == 0 && self.inequality {
            0.0
        } else {
            self.worst
        };
        let ok = if self.inequality { worst >= -tol } else { worst <= tol };
        IdentityCheck {
            name: self.name.to_string(),
            cases: self.cases,
            worst,
            ok,
        }
    }
}

fn check_identities(dual: &DualSolution, tol: f64) -> Vec<IdentityCheck> {
    let m = dual.m_count as i64;
    let q_max = dual.q_max;
    let last = dual.last_start();
    let eta = |i: i64| dual.eta(i);
    let dsum_m = dual.delta * dual.delta_sum(m - 1);

    let mut geometric = IdentityAcc::equality("eta_shift");
    for i in -(m + 1)..=q_max as i64 {
        for s in 0..=m {
            if i + s <= q_max as i64 {
                let lhs = eta(i) * dual.delta.powi(s as i32);
                geometric.eq(lhs, eta(i + s), &[lhs]);
            }
        }
    }

    let mut r_q = IdentityAcc::equality("R_q");
    for q in 0..=q_max {
        let expected = if dual.in_last_block(q) { 0.0 } else { dsum_m };
        r_q.eq(dual.r(q), expected, &[dsum_m]);
    }

    let mut c_q = IdentityAcc::equality("C_q");
    let mut e_csum = IdentityAcc::equality("E_Csum");
    for q in 0..last {
        let qi = q as i64;
        let terms = [eta(qi + m), -eta(qi), eta(qi - 1), -eta(qi - m - 1)];
        c_q.eq(dual.c[q], kahan_sum(terms), &terms);
        let s: Vec<f64> = dual.s_of(q).map(|l| -dual.c[l]).collect();
        let lhs = kahan_sum(std::iter::once(dual.e(dual.l_of(q))).chain(s.iter().copied()));
        e_csum.eq(lhs, eta(qi + m) + eta(qi - 1), &[dual.e(dual.l_of(q)), eta(qi + m)]);
    }

    let mut gh = IdentityAcc::equality("GH_relation");
    let mut hg = IdentityAcc::equality("H_and_G_better");
    let mut g_rel = IdentityAcc::at_least_zero("G_relation");
    let mut tech = IdentityAcc::equality("dual_tech");
    let mut tech2 = IdentityAcc::equality("dual_tech_2");
    let mut tech2_cases = IdentityAcc::equality("dual_tech_2_cases");
    for q in 0..=q_max {
        let qi = q as i64;
        for j in 0..=q {
            let ji = j as i64;
            let (b, g, h) = (dual.b[q][j], dual.g[q][j], dual.h[q][j]);
            let (ej, ejm) = (eta(ji), eta(ji - 1));
            let dg = (ej - ejm) * g;
            gh.eq(ej * g - ejm * h, dg + ejm - ejm * b, &[ej * g, ejm * h, ejm * b]);

            let table = if j >= last {
                eta(qi + ji - last as i64) - eta(qi)
            } else if ji < qi - m {
                eta(qi - m - 1) - eta(ji - 1)
            } else {
                0.0
            };
            hg.eq(dg, table, &[ej * g, ejm * g, eta(qi)]);
            g_rel.nonneg(dg + ejm - eta(qi - m - 1), &[ej * g, ejm * g, eta(qi)]);

            let v = dual.v(q, j);
            if !dual.in_last_block(q) {
                let terms = [eta(qi), -eta(qi - 1), -eta(qi + m), -ejm * b, dg, ejm];
                tech.eq(v, kahan_sum(terms), &terms);
            } else {
                let terms = [eta(qi), dg, -ejm * b, ejm];
                tech2.eq(v, kahan_sum(terms), &terms);
                // case split by B; the third range is j in [Q-M+1, q]
                let xi = dual.xi(q);
                let tail = eta(last as i64 - 1);
                let (b_case, v_case) = if ji < qi - m {
                    (0.0, tail * (xi - 1.0) + eta(qi - m - 1))
                } else if j < last {
                    (1.0, tail * (xi - 1.0))
                } else {
                    (xi, 0.0)
                };
                tech2_cases.eq(b, b_case, &[xi]);
                tech2_cases.eq(v, v_case, &[tail * xi, eta(qi)]);
            }
        }
    }
    [geometric, r_q, c_q, e_csum, gh, hg, g_rel, tech, tech2, tech2_cases]
        .into_iter()
        .map(|acc| acc.finish(tol))
        .collect()
}

fn negative_entries(dual: &DualSolution, tol: f64) -> Vec<String> {
    let mut out = Vec::new();
    let last = dual.last_start();
    let mut flag = |name: String, v: f64, scale: f64| {
        if v < -tol * scale.max(1.0) {
            out.push(format!("{name} = {v}"));
        }
    };
    for (i, &v) in dual.xi.iter().enumerate() {
        flag(format!("xi_{}", i + last), v, 1.0);
    }
    for (i, &v) in dual.e.iter().enumerate() {
        flag(format!("E_{}", i + last), v, v.abs());
    }
    for (q, &v) in dual.c.iter().enumerate() {
        flag(format!("C_{q}"), v, v.abs());
    }
    for q in 0..=dual.q_max {
        for j in 0..=q {
            flag(format!("B_{q}_{j}"), dual.b[q][j], 1.0);
            flag(format!("G_{q}_{j}"), dual.g[q][j], 1.0);
            flag(format!("H_{q}_{j}"), dual.h[q][j], 1.0);
        }
        for l in 0..q {
            flag(format!("D_{q}_{l}"), dual.d[q][l], 1.0);
        }
    }
    out
}

/// Checks non-negativity, every dual constraint over its full index range,
/// equality on the tight families, and the helper identities.
pub fn verify_dual(dual: &DualSolution, tol: f64) -> DualReport {
    let cells: Vec<(usize, usize)> = (0..=dual.q_max).flat_map(|q| (0..=q).map(move |j| (q, j))).collect();
    let mut checks: Vec<ConstraintCheck> = cells
        .par_iter()
        .flat_map_iter(|&(q, j)| dual_constraints(dual, q, j))
        .collect();
    checks.sort_by_key(|c| (c.family, c.index));
    let families: Vec<DualFamilySummary> = (13..=20u8)
        .map(|family| {
            let rows: Vec<&ConstraintCheck> = checks.iter().filter(|c| c.family == family).collect();
            let slacks = rows.iter().map(|c| c.scaled_slack());
            let min_slack = slacks.clone().fold(f64::INFINITY, f64::min);
            let max_slack = slacks.clone().fold(f64::NEG_INFINITY, f64::max);
            DualFamilySummary {
                family,
                rows: rows.len(),
                min_slack,
                max_slack,
                violations: slacks.filter(|s| *s < -tol).count(),
                tight: rows.iter().all(|c| c.scaled_slack().abs() <= tol),
            }
        })
        .collect();
    let negative = negative_entries(dual, tol);
    let identities = check_identities(dual, tol);
    let feasible = negative.is_empty() && families.iter().all(|f| f.violations == 0);
    DualReport {
        gamma: dual.gamma,
        m_count: dual.m_count,
        k: dual.k,
        q_max: dual.q_max,
        tolerance: tol,
        families,
        checks,
        negative_entries: negative,
        identities,
        objective: dual.objective(),
        expected_objective: expected_dual_objective(dual.gamma, dual.m_count),
        feasible,
    }
}

/// `sum_q xi_q`.
pub fn dual_objective(dual: &DualSolution) -> f64 {
    dual.objective()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dual(gamma: f64, m: usize, k: usize) -> DualSolution {
        let grid = PhaseGrid::new(gamma, m, 1.0 / m as f64, 1.0).unwrap();
        build_dual(&grid, k).unwrap()
    }

    #[test]
    fn single_offset_values() {
        let d = dual(1.0, 1, 3);
        assert!((d.xi(d.q_max) - 4.0).abs() < 1e-12);
        for q in 0..d.last_start() {
            assert!((d.b[q][q] - 3.0).abs() < 1e-12);
        }
        assert!((dual_objective(&d) - 4.0).abs() < 1e-12);
        assert!((dual_objective(&dual(0.0, 1, 2)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn two_offsets_objective() {
        let d = dual(1.0, 2, 2);
        let expected = 2.0 + 3f64.sqrt() + 3.0;
        assert!((dual_objective(&d) - expected).abs() < 1e-12);
        assert!((expected / 2.0 - 3.366025403784438).abs() < 1e-12);
    }

    #[test]
    fn r_q_split() {
        for m in 1..=4 {
            let d = dual(0.5, m, 3);
            let dm = d.delta * d.delta_sum(m as i64 - 1);
            for q in 0..=d.q_max {
                let expected = if d.in_last_block(q) { 0.0 } else { dm };
                assert!((d.r(q) - expected).abs() < 1e-9 * dm);
            }
        }
    }

    #[test]
    fn feasible_for_gamma_one_single_offset() {
        for k in 1..=6 {
            let report = verify_dual(&dual(1.0, 1, k), 1e-9);
            assert!(report.feasible, "K = {k}: {:?}", report.worst());
            assert!(report.tight_families_hold());
            assert!(report.identities_hold(), "{:?}", report.identities);
        }
    }

    #[test]
    fn feasible_for_gamma_zero_several_offsets() {
        for m in 1..=5 {
            for k in 1..=4 {
                let report = verify_dual(&dual(0.0, m, k), 1e-9);
                assert!(report.feasible, "M = {m}, K = {k}: {:?}", report.worst());
                assert!(report.identities_hold(), "{:?}", report.identities);
            }
        }
    }

    #[test]
    fn perturbed_entry_is_caught() {
        let mut d = dual(1.0, 2, 2);
        d.b[3][1] += 1e-3;
        let report = verify_dual(&d, 1e-9);
        assert!(!report.feasible || !report.tight_families_hold());
    }
}
