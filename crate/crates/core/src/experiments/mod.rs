//! Experiment drivers: single runs, tightness constructions, the flawed
//! lower-bound formula, the LP audit chain and fuzzing, all producing
//! [`ExperimentReport`]s or their own row types.

pub mod audit;
pub mod flaw;
pub mod fuzz;
pub mod output;
pub mod tightness;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::mimic::{deterministic_bound, disc_bound, randomized_bound, randomized_expected_cost, run_disc, run_mimic};
use crate::model::Instance;
use crate::oracle::Oracle;
use crate::problems::OracleCaps;
use crate::tol::REL_TOL;

pub use audit::{audit_instance, AuditOptions, AuditReport};
pub use flaw::{flaw_limit, flaw_table, flaw_value, FlawRow};
pub use fuzz::{fuzz, FuzzConfig, FuzzReport};
pub use tightness::{tightness_report, TightnessRow};

/// Online algorithm to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "lowercase")]
pub enum Algorithm {
    Mimic { omega: f64 },
    Disc { m_count: usize, beta: f64 },
    Randomized { quadrature: usize },
}

impl Algorithm {
    pub fn label(&self) -> String {
        match self {
            Algorithm::Mimic { omega } => format!("mimic(omega={omega})"),
            Algorithm::Disc { m_count, beta } => format!("disc(M={m_count},beta={beta})"),
            Algorithm::Randomized { .. } => "randomized".to_string(),
        }
    }

    /// Proven upper bound on the ratio for reset factor `gamma`.
    pub fn bound(&self, gamma: f64) -> f64 {
        match self {
            Algorithm::Mimic { .. } => deterministic_bound(gamma),
            Algorithm::Disc { m_count, .. } => disc_bound(gamma, *m_count),
            Algorithm::Randomized { .. } => randomized_bound(gamma),
        }
    }
}

/// One instance evaluated under one algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: u64,
    pub problem: String,
    pub gamma: f64,
    pub algorithm: String,
    pub cost: f64,
    pub opt: f64,
    pub ratio: f64,
    pub bound: f64,
    /// `bound - ratio`.
    pub margin: f64,
    /// Rows built to exceed their bound on purpose.
    pub negative_test: bool,
}

impl ReportRow {
    pub fn new(id: u64, instance: &Instance, algorithm: String, cost: f64, opt: f64, bound: f64) -> Self {
        let ratio = cost / opt;
        ReportRow {
            id,
            problem: instance.kind().to_string(),
            gamma: instance.gamma(),
            algorithm,
            cost,
            opt,
            ratio,
            bound,
            margin: bound - ratio,
            negative_test: false,
        }
    }

    /// `ratio <= bound` up to `tol` (absolute on the ratio).
    pub fn within_bound(&self, tol: f64) -> bool {
        self.ratio <= self.bound + tol
    }
}

/// Summary over all rows.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub count: usize,
    pub max_ratio: f64,
    pub min_margin: f64,
    pub violations: usize,
}

/// Per-instance rows plus the aggregate.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ReportRow>,
    pub aggregate: Aggregate,
}

/// Slack allowed on ratio-versus-bound comparisons.
pub const BOUND_TOL: f64 = REL_TOL;

impl ExperimentReport {
    pub fn from_rows(rows: Vec<ReportRow>) -> Self {
        let aggregate = Aggregate {
            count: rows.len(),
            max_ratio: rows.iter().map(|r| r.ratio).fold(0.0, f64::max),
            min_margin: rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min),
            violations: rows
                .iter()
                .filter(|r| !r.negative_test && !r.within_bound(BOUND_TOL))
                .count(),
        };
        ExperimentReport { rows, aggregate }
    }

    pub fn passed(&self) -> bool {
        self.aggregate.violations == 0
    }
}

/// Runs `algorithm` on `instance` and compares with `OPT`.
pub fn evaluate(id: u64, instance: &Instance, algorithm: Algorithm, caps: OracleCaps) -> Result<ReportRow> {
    let oracle = Oracle::new(instance, caps);
    evaluate_with(id, &oracle, algorithm)
}

/// As [`evaluate`], reusing an oracle (and its cache).
pub fn evaluate_with(id: u64, oracle: &Oracle<'_>, algorithm: Algorithm) -> Result<ReportRow> {
    let instance = oracle.instance();
    let opt = oracle.optimal_offline()?.cost.total;
    let cost = match algorithm {
        Algorithm::Mimic { omega } => run_mimic(oracle, omega)?.cost.total,
        Algorithm::Disc { m_count, beta } => run_disc(oracle, m_count, beta)?.expected.total,
        Algorithm::Randomized { quadrature } => randomized_expected_cost(oracle, quadrature)?.expected_cost,
    };
    Ok(ReportRow::new(
        id,
        instance,
        algorithm.label(),
        cost,
        opt,
        algorithm.bound(instance.gamma()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Environment, Job, Payload, TrpEnvironment, TrpPayload};
    use crate::problems::metric::MetricSpace;

    fn single_trp() -> Instance {
        let metric = MetricSpace::line(&[0.0, 1.0], 0).unwrap();
        let job = Job {
            id: 0,
            arrival: 1.0,
            weight: 1.0,
            payload: Payload::Trp(TrpPayload { location: 1 }),
        };
        Instance::new(vec![job], Environment::Trp(TrpEnvironment { metric, servers: 1 }), 1.0).unwrap()
    }

    #[test]
    fn single_job_rows() {
        let inst = single_trp();
        let caps = OracleCaps::default();
        let m = evaluate(0, &inst, Algorithm::Mimic { omega: 0.0 }, caps).unwrap();
        assert!((m.ratio - 4.0).abs() < 1e-12 && m.bound == 4.0);
        let r = evaluate(0, &inst, Algorithm::Randomized { quadrature: 16 }, caps).unwrap();
        assert!((r.ratio - 2.820_478_453).abs() < 1e-6);
        assert!((r.bound - 2.820_478_453).abs() < 1e-6);
        let report = ExperimentReport::from_rows(vec![m, r]);
        assert!(report.passed());
        assert_eq!(report.aggregate.count, 2);
    }
}
