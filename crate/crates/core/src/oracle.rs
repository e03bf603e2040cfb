//! Exact offline computations: `OPT`, the minimizer `S_tau` of `val_tau`,
//! and detection of the first phase whose schedules finish every job.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mimic::PhaseGrid;
use crate::model::{weight_of, ActionSchedule, CostBreakdown, Instance, JobSet, TimePoint};
use crate::problems::{subset_optima, OracleCaps};
use crate::tol::{audit_tolerance, rel_diff, TIE_REL};

/// `S_tau` together with its value and completed set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrizeCollectingResult {
    pub schedule: ActionSchedule,
    pub value: f64,
    pub completed: JobSet,
}

/// An optimal offline schedule completing all jobs. Its duration is the
/// smallest float above the makespan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OfflineOptimum {
    pub cost: CostBreakdown,
    pub schedule: ActionSchedule,
}

/// Default upper bound for the completion-phase search.
pub const DEFAULT_MAX_K: usize = 30;

/// Memoizing oracle bound to one instance. `S_tau` results are cached by the
/// exact bit pattern of `tau`.
pub struct Oracle<'a> {
    instance: &'a Instance,
    caps: OracleCaps,
    cache: Mutex<HashMap<u64, Arc<PrizeCollectingResult>>>,
    opt: Mutex<Option<Arc<OfflineOptimum>>>,
}

impl<'a> Oracle<'a> {
    pub fn new(instance: &'a Instance, caps: OracleCaps) -> Self {
        Oracle {
            instance,
            caps,
            cache: Mutex::new(HashMap::new()),
            opt: Mutex::new(None),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn caps(&self) -> &OracleCaps {
        &self.caps
    }

    /// `S_tau` over `I_tau`.
    pub fn best_tau_schedule(&self, tau: TimePoint) -> Result<Arc<PrizeCollectingResult>> {
        let key = tau.value().to_bits();
        if let Some(hit) = self.cache.lock().expect("oracle cache poisoned").get(&key) {
            return Ok(hit.clone());
        }
        let arrived = self.instance.arrived_by(tau.value());
        let result = Arc::new(best_tau_schedule(tau, arrived, self.instance, &self.caps)?);
        self.cache
            .lock()
            .expect("oracle cache poisoned")
            .insert(key, result.clone());
        Ok(result)
    }

    pub fn optimal_offline(&self) -> Result<Arc<OfflineOptimum>> {
        if let Some(opt) = self.opt.lock().expect("oracle cache poisoned").as_ref() {
            return Ok(opt.clone());
        }
        let opt = Arc::new(optimal_offline(self.instance, &self.caps)?);
        *self.opt.lock().expect("oracle cache poisoned") = Some(opt.clone());
        Ok(opt)
    }

    /// Smallest `K >= 1` such that for every offset `m`, `S_{eta(m + K M)}`
    /// completes all jobs at cost `OPT`.
    pub fn detect_completion_phase(&self, grid: &PhaseGrid, max_k: usize) -> Result<usize> {
        let opt = self.optimal_offline()?.cost.total;
        let all = self.instance.all_jobs();
        let tol = audit_tolerance();
        for k in 1..=max_k {
            let mut ok = true;
            for m in 0..grid.m_count() {
                let s = self.best_tau_schedule(grid.tau(k, m))?;
                if s.completed != all || rel_diff(s.value, opt) > tol {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(k);
            }
        }
        Err(Error::CompletionSearchExhausted(max_k))
    }
}

/// `S_tau`: minimizes `val_tau` over all `tau`-schedules on `arrived`.
///
/// Values within a relative band of [`TIE_REL`] of the minimum tie. Ties go
/// to the smaller schedule cost (same band), then to fewer completed jobs,
/// then to the lexicographically smallest completed id set.
pub fn best_tau_schedule(
    tau: TimePoint,
    arrived: JobSet,
    instance: &Instance,
    caps: &OracleCaps,
) -> Result<PrizeCollectingResult> {
    let candidates = subset_optima(instance, arrived, tau.value(), caps)?;
    let mut scored = Vec::with_capacity(candidates.len());
    for c in candidates {
        let penalty = weight_of(arrived.difference(c.set), instance)?;
        scored.push((c.cost + tau.value() * penalty, c));
    }
    let band = |min: f64| min + TIE_REL * min.abs().max(1.0);
    let min_val = scored.iter().map(|(v, _)| *v).fold(f64::INFINITY, f64::min);
    scored.retain(|(v, _)| *v <= band(min_val));
    let min_cost = scored.iter().map(|(_, c)| c.cost).fold(f64::INFINITY, f64::min);
    let (_, best) = scored
        .into_iter()
        .filter(|(_, c)| c.cost <= band(min_cost))
        .min_by(|(_, a), (_, b)| a.set.len().cmp(&b.set.len()).then(a.set.lex_cmp(b.set)))
        .ok_or_else(|| Error::Inconsistent("no tau-schedule found".into()))?;
    let schedule = ActionSchedule {
        duration: tau,
        completions: best.completions,
        actions: best.actions,
    };
    // recompute through the shared cost definition
    let value = crate::model::val(&schedule, tau, arrived, instance)?;
    Ok(PrizeCollectingResult {
        schedule,
        value,
        completed: best.set,
    })
}

/// Cost-optimal offline schedule completing every job.
pub fn optimal_offline(instance: &Instance, caps: &OracleCaps) -> Result<OfflineOptimum> {
    let all = instance.all_jobs();
    let best = subset_optima(instance, all, f64::INFINITY, caps)?
        .into_iter()
        .find(|o| o.set == all)
        .ok_or_else(|| Error::Inconsistent("no schedule completes every job".into()))?;
    let makespan = best.completions.values().copied().fold(0.0, f64::max);
    let schedule = ActionSchedule {
        duration: TimePoint::new(makespan.next_up())?,
        completions: best.completions,
        actions: best.actions,
    };
    let cost = CostBreakdown::from_completions(instance, &schedule.completions)?;
    Ok(OfflineOptimum { cost, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Environment, Job, MachinePayload, MachinesEnvironment, Payload, TrpEnvironment, TrpPayload};
    use crate::problems::metric::MetricSpace;

    fn trp(jobs: &[(f64, f64, usize)], coords: &[f64]) -> Instance {
        let metric = MetricSpace::line(coords, 0).unwrap();
        let jobs = jobs
            .iter()
            .map(|&(a, w, loc)| Job {
                id: 0,
                arrival: a,
                weight: w,
                payload: Payload::Trp(TrpPayload { location: loc }),
            })
            .collect();
        Instance::new(jobs, Environment::Trp(TrpEnvironment { metric, servers: 1 }), 1.0).unwrap()
    }

    fn tp(t: f64) -> TimePoint {
        TimePoint::new(t).unwrap()
    }

    #[test]
    fn offline_single_job() {
        let inst = trp(&[(1.0, 1.0, 1)], &[0.0, 1.0]);
        assert_eq!(optimal_offline(&inst, &OracleCaps::default()).unwrap().cost.total, 1.0);
    }

    #[test]
    fn offline_two_job_tightness_instance() {
        let eps = 1e-3;
        let a1 = 3.0 + eps;
        let inst = trp(&[(1.0, eps, 1), (a1, 1.0, 1)], &[0.0, 1.0]);
        let opt = optimal_offline(&inst, &OracleCaps::default()).unwrap();
        assert!((opt.cost.total - (3.0 + 2.0 * eps)).abs() < 1e-12);
    }

    #[test]
    fn offline_machines_both_orders() {
        let job = || Job {
            id: 0,
            arrival: 0.0,
            weight: 1.0,
            payload: Payload::Machine(MachinePayload {
                exec_times: vec![1.0],
                predecessors: vec![],
            }),
        };
        let env = Environment::Machines(MachinesEnvironment {
            machines: 1,
            preemptive: false,
        });
        let inst = Instance::new(vec![job(), job()], env, 0.0).unwrap();
        assert_eq!(optimal_offline(&inst, &OracleCaps::default()).unwrap().cost.total, 3.0);
    }

    #[test]
    fn best_tau_examples() {
        let caps = OracleCaps::default();
        let inst = trp(&[(1.0, 1.0, 1)], &[0.0, 1.0]);
        let none = best_tau_schedule(tp(3.0), JobSet::EMPTY, &inst, &caps).unwrap();
        assert_eq!(none.value, 0.0);
        assert!(none.completed.is_empty());
        let short = best_tau_schedule(tp(0.5), JobSet::singleton(0), &inst, &caps).unwrap();
        assert_eq!(short.value, 0.5);
        assert!(short.completed.is_empty());
        let s = best_tau_schedule(tp(2.0), JobSet::singleton(0), &inst, &caps).unwrap();
        assert_eq!(s.value, 1.0);
        assert_eq!(s.schedule.completion(0), Some(1.0));
    }

    #[test]
    fn ties_go_to_smallest_id_set() {
        // {0}: 1 + 4 * 3 = 13, {1}: 3 * 3 + 4 * 1 = 13; both together miss tau
        let caps = OracleCaps::default();
        let inst = trp(&[(0.0, 1.0, 1), (0.0, 3.0, 2)], &[0.0, 1.0, -3.0]);
        let s = best_tau_schedule(tp(4.0), inst.all_jobs(), &inst, &caps).unwrap();
        assert_eq!(s.value, 13.0);
        assert_eq!(s.completed, JobSet::singleton(0));
    }

    #[test]
    fn oracle_caches_by_tau() {
        let inst = trp(&[(1.0, 1.0, 1)], &[0.0, 1.0]);
        let oracle = Oracle::new(&inst, OracleCaps::default());
        let a = oracle.best_tau_schedule(tp(2.0)).unwrap();
        let b = oracle.best_tau_schedule(tp(2.0)).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
