//! Randomized acceptance driver: generates instances, runs MIMIC and DISC
//! configurations (with the LP audit chain) on each, and collects every
//! bound or audit failure together with a reproducible instance dump.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::audit::{audit_instance, AuditOptions};
use super::{evaluate_with, Algorithm, ExperimentReport, ReportRow, BOUND_TOL};
use crate::error::Result;
use crate::generator::{generate, GeneratorConfig};
use crate::io::instance_to_json;
use crate::mimic::disc_bound;
use crate::model::Instance;
use crate::oracle::Oracle;
use crate::problems::OracleCaps;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzConfig {
    pub generator: GeneratorConfig,
    pub count: usize,
    pub seed: u64,
    /// Run MIMIC(gamma, 0).
    pub mimic: bool,
    /// DISC configurations `(M, beta)`.
    pub disc: Vec<(usize, f64)>,
    /// Run the LP audit for every DISC configuration.
    pub audit: bool,
    /// Solve audited primals in exact rationals.
    pub exact: bool,
    pub caps: OracleCaps,
}

impl FuzzConfig {
    pub fn new(generator: GeneratorConfig, count: usize, seed: u64) -> Self {
        FuzzConfig {
            generator,
            count,
            seed,
            mimic: true,
            disc: Vec::new(),
            audit: false,
            exact: false,
            caps: OracleCaps::default(),
        }
    }

    /// `M` in `1..=3` with `beta` in `{1/(2M), 1/M}`.
    pub fn standard_disc() -> Vec<(usize, f64)> {
        (1..=3)
            .flat_map(|m| [(m, 0.5 / m as f64), (m, 1.0 / m as f64)])
            .collect()
    }

    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn with_disc(mut self, disc: Vec<(usize, f64)>, audit: bool) -> Self {
        self.disc = disc;
        self.audit = audit;
        self
    }
}

/// Condensed audit outcome for one instance and DISC configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditDigest {
    pub id: u64,
    pub m_count: usize,
    pub beta: f64,
    pub k: usize,
    pub q_max: usize,
    pub ratio: f64,
    pub primal_optimum: Option<f64>,
    pub dual_objective: f64,
    pub passed: bool,
}

/// A failing instance with enough data to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzFailure {
    pub id: u64,
    pub messages: Vec<String>,
    pub instance_json: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub config: FuzzConfig,
    pub report: ExperimentReport,
    pub audits: Vec<AuditDigest>,
    pub failures: Vec<FuzzFailure>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.report.passed()
    }
}

struct Outcome {
    rows: Vec<ReportRow>,
    audits: Vec<AuditDigest>,
    failure: Option<FuzzFailure>,
}

fn check_instance(
    cfg: &FuzzConfig,
    id: u64,
    instance: &Instance,
) -> Result<(Vec<ReportRow>, Vec<AuditDigest>, Vec<String>)> {
    let oracle = Oracle::new(instance, cfg.caps);
    let opt = oracle.optimal_offline()?.cost.total;
    let mut rows = Vec::new();
    let mut audits = Vec::new();
    let mut messages = Vec::new();
    if cfg.mimic {
        rows.push(evaluate_with(id, &oracle, Algorithm::Mimic { omega: 0.0 })?);
    }
    for &(m_count, beta) in &cfg.disc {
        let algorithm = Algorithm::Disc { m_count, beta };
        if cfg.audit {
            let opts = AuditOptions {
                exact: cfg.exact,
                ..AuditOptions::new(m_count, beta)
            };
            let audit = audit_instance(instance, &oracle, opts)?;
            rows.push(ReportRow::new(
                id,
                instance,
                algorithm.label(),
                audit.expected_cost,
                opt,
                disc_bound(instance.gamma(), m_count),
            ));
            messages.extend(audit.violations.iter().map(|v| format!("{}: {v}", algorithm.label())));
            audits.push(AuditDigest {
                id,
                m_count,
                beta,
                k: audit.k,
                q_max: audit.q_max,
                ratio: audit.ratio,
                primal_optimum: audit.primal_optimum,
                dual_objective: audit.dual.objective,
                passed: audit.passed(),
            });
        } else {
            rows.push(evaluate_with(id, &oracle, algorithm)?);
        }
    }
    for r in rows.iter().filter(|r| !r.within_bound(BOUND_TOL)) {
        messages.push(format!("{}: ratio {} exceeds bound {}", r.algorithm, r.ratio, r.bound));
    }
    Ok((rows, audits, messages))
}

fn run_one(cfg: &FuzzConfig, id: u64) -> Outcome {
    let instance = match generate(&cfg.generator, cfg.seed, id) {
        Ok(i) => i,
        Err(e) => {
            let failure = FuzzFailure {
                id,
                messages: vec![format!("generator: {e}")],
                instance_json: String::new(),
            };
            return Outcome {
                rows: vec![],
                audits: vec![],
                failure: Some(failure),
            };
        }
    };
    let (rows, audits, messages) = match check_instance(cfg, id, &instance) {
        Ok(r) => r,
        Err(e) => (vec![], vec![], vec![format!("error: {e}")]),
    };
    let failure = (!messages.is_empty()).then(|| FuzzFailure {
        id,
        messages,
        instance_json: instance_to_json(&instance).unwrap_or_default(),
    });
    Outcome { rows, audits, failure }
}

/// Runs the configured checks on `count` generated instances in parallel.
/// Rows appear in instance order.
pub fn fuzz(cfg: &FuzzConfig) -> FuzzReport {
    let outcomes: Vec<Outcome> = (0..cfg.count as u64)
        .into_par_iter()
        .map(|id| run_one(cfg, id))
        .collect();
    let mut rows = Vec::new();
    let mut audits = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        rows.extend(o.rows);
        audits.extend(o.audits);
        failures.extend(o.failure);
    }
    FuzzReport {
        config: cfg.clone(),
        report: ExperimentReport::from_rows(rows),
        audits,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ProblemKind;

    #[test]
    fn small_fuzz_is_deterministic_and_clean() {
        let cfg = FuzzConfig::new(GeneratorConfig::new(ProblemKind::Trp).with_jobs(3), 12, 5)
            .with_disc(vec![(2, 0.25)], true);
        let a = fuzz(&cfg);
        assert!(a.passed(), "{:?}", a.failures);
        assert_eq!(a.report.rows.len(), 24);
        let b = fuzz(&cfg);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.report.rows.windows(2).all(|w| w[0].id <= w[1].id));
    }
}
