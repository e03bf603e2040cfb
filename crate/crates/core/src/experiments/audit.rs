//! The full chain on one instance: DISC run, fresh/stale partition, primal
//! point check, closed-form dual, and (for small `Q`) the primal optimum.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lpaudit::{
    build_dual, build_primal, check_primal_point, reference_optimum, verify_dual, Arithmetic, PrimalCheck, PrimalLp,
    MAX_EXACT_Q, MAX_SOLVE_Q,
};
use crate::mimic::{disc_bound, extract_partition, run_disc_to_completion, FreshStalePartition, PhaseGrid};
use crate::model::Instance;
use crate::oracle::{Oracle, DEFAULT_MAX_K};
use crate::tol::{audit_tolerance, kahan_sum, rel_diff};

/// Slack on the weak-duality chain.
pub const CHAIN_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditOptions {
    pub m_count: usize,
    pub beta: f64,
    pub max_k: usize,
    /// Solve the primal when `Q` is small enough.
    pub solve: bool,
    /// Solve the primal in exact rationals.
    pub exact: bool,
}

impl AuditOptions {
    pub fn new(m_count: usize, beta: f64) -> Self {
        AuditOptions {
            m_count,
            beta,
            max_k: DEFAULT_MAX_K,
            solve: true,
            exact: false,
        }
    }
}

/// Condensed dual verification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualSummary {
    pub feasible: bool,
    pub tight_families: bool,
    pub identities: bool,
    pub objective: f64,
    pub expected_objective: f64,
    /// Most negative scaled slack, with family and index.
    pub worst: Option<(u8, (usize, usize), f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub m_count: usize,
    pub beta: f64,
    pub gamma: f64,
    pub k: usize,
    pub q_max: usize,
    pub opt: f64,
    pub expected_cost: f64,
    pub ratio: f64,
    pub bound: f64,
    /// Relative gap between the partition's cost formula and `E[cost]`.
    pub disc_identity_error: f64,
    /// Per last-block `q`, relative gap between `sum_j g_qj` and `OPT`.
    pub last_block_errors: Vec<f64>,
    pub primal: PrimalCheck,
    pub dual: DualSummary,
    pub primal_optimum: Option<f64>,
    pub chain_holds: bool,
    pub violations: Vec<String>,
    pub tolerance: f64,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Runs the chain and collects every failed check as a violation message.
/// Also returns the primal (for export) and the partition.
pub fn audit_full(
    instance: &Instance,
    oracle: &Oracle<'_>,
    opts: AuditOptions,
) -> Result<(AuditReport, PrimalLp, FreshStalePartition)> {
    let tol = audit_tolerance();
    let grid = PhaseGrid::for_instance(instance, opts.m_count, opts.beta)?;
    let (run, k) = run_disc_to_completion(oracle, &grid, opts.max_k)?;
    let opt = oracle.optimal_offline()?.cost.total;
    let expected = run.expected.total;
    let part = extract_partition(&run, k, instance)?;
    let lp = build_primal(&grid, k)?;
    let mut violations = Vec::new();

    let disc_identity_error = rel_diff(part.disc_cost(&grid), expected);
    if disc_identity_error > tol {
        violations.push(format!("DISC cost identity off by {disc_identity_error:e}"));
    }
    let last_block_errors: Vec<f64> = (part.q_max + 1 - part.m_count..=part.q_max)
        .map(|q| rel_diff(kahan_sum((0..=q).map(|j| part.g(q, j))), opt))
        .collect();
    for (i, e) in last_block_errors.iter().enumerate() {
        if *e > tol {
            violations.push(format!(
                "last-block schedule {} costs differ from OPT by {e:e}",
                part.q_max + 1 - part.m_count + i
            ));
        }
    }
    let primal = check_primal_point(&part, &lp, Some(opt), tol)?;
    for f in primal.families.iter().filter(|f| f.max_violation > tol) {
        violations.push(format!(
            "primal family {} ({}) violated by {:e} at {}",
            f.family.number(),
            f.family.label(),
            f.max_violation,
            f.worst_row.as_deref().unwrap_or("?")
        ));
    }
    let ratio = expected / opt;
    if rel_diff(primal.objective_over_m, ratio) > tol {
        violations.push(format!(
            "objective/M = {} but E[cost]/OPT = {ratio}",
            primal.objective_over_m
        ));
    }

    let dual = build_dual(&grid, k)?;
    let report = verify_dual(&dual, tol);
    let dual_summary = DualSummary {
        feasible: report.feasible,
        tight_families: report.tight_families_hold(),
        identities: report.identities_hold(),
        objective: report.objective,
        expected_objective: report.expected_objective,
        worst: report.worst(),
    };
    if !report.feasible {
        violations.push(format!("dual infeasible: {:?}", report.worst()));
    }
    if !report.tight_families_hold() {
        violations.push("dual equality families not tight".into());
    }
    if !report.identities_hold() {
        let bad: Vec<&str> = report
            .identities
            .iter()
            .filter(|i| !i.ok)
            .map(|i| i.name.as_str())
            .collect();
        violations.push(format!("dual identities failed: {}", bad.join(", ")));
    }

    let m = opts.m_count as f64;
    let primal_optimum = if opts.solve && lp.q_max <= MAX_SOLVE_Q {
        let arithmetic = if opts.exact && lp.q_max <= MAX_EXACT_Q {
            Arithmetic::Rational
        } else {
            Arithmetic::Float
        };
        Some(reference_optimum(instance.gamma(), opts.m_count, opts.beta, k, arithmetic)?.value)
    } else {
        None
    };
    let bound = disc_bound(instance.gamma(), opts.m_count);
    let mut chain_holds = ratio <= bound + tol && report.objective / m <= bound * (1.0 + 1e-12);
    if let Some(p) = primal_optimum {
        let ok = m * ratio <= p + CHAIN_TOL && p <= report.objective + CHAIN_TOL;
        if !ok {
            violations.push(format!(
                "weak-duality chain broken: M*ratio = {}, P* = {p}, dual = {}",
                m * ratio,
                report.objective
            ));
        }
        chain_holds &= ok;
    }
    if ratio > bound + tol {
        violations.push(format!("E[cost]/OPT = {ratio} exceeds {bound}"));
    }
    let audit = AuditReport {
        m_count: opts.m_count,
        beta: opts.beta,
        gamma: instance.gamma(),
        k,
        q_max: lp.q_max,
        opt,
        expected_cost: expected,
        ratio,
        bound,
        disc_identity_error,
        last_block_errors,
        primal,
        dual: dual_summary,
        primal_optimum,
        chain_holds,
        violations,
        tolerance: tol,
    };
    Ok((audit, lp, part))
}

/// [`audit_full`] without the primal and partition.
pub fn audit_instance(instance: &Instance, oracle: &Oracle<'_>, opts: AuditOptions) -> Result<AuditReport> {
    Ok(audit_full(instance, oracle, opts)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::tightness::two_job_instance;
    use crate::problems::OracleCaps;

    #[test]
    fn tightness_instance_passes_every_check() {
        let inst = two_job_instance(1.0, 0.0, 1e-3).unwrap();
        let oracle = Oracle::new(&inst, OracleCaps::default());
        let report = audit_instance(&inst, &oracle, AuditOptions::new(1, 1.0)).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.k, 2);
        assert!(report.chain_holds);
        let p = report.primal_optimum.unwrap();
        assert!(report.ratio <= p + 1e-7 && p <= 4.0 + 1e-7);
    }
}
