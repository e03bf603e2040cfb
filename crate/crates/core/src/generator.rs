//! Seeded random instances for fuzzing.
//!
//! Routing metrics are complete graphs with log-uniform edge lengths, closed
//! under shortest paths. Arrivals and weights are log-uniform; a fraction of
//! arrivals repeat an earlier one so simultaneous releases are exercised.
//! Machine instances draw per-machine execution times (occasionally
//! forbidding a machine) and, optionally, a random precedence DAG whose
//! edges always point from a lower to a higher id.
//!
//! Instance `i` of seed `s` comes from ChaCha8 stream `i` under key `s`, so
//! the output does not depend on generation order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    DarpEnvironment, DarpPayload, Environment, Instance, Job, MachinePayload, MachinesEnvironment, Payload,
    ProblemKind, TrpEnvironment, TrpPayload,
};
use crate::problems::metric::MetricSpace;

/// Knobs of the generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub problem: ProblemKind,
    pub min_jobs: usize,
    pub max_jobs: usize,
    /// Metric size range for routing problems (origin included).
    pub min_points: usize,
    pub max_points: usize,
    pub servers: usize,
    /// DARP capacity; `None` is unbounded.
    pub capacity: Option<usize>,
    pub preemptive: bool,
    pub machines: usize,
    /// Probability of each forward precedence edge.
    pub precedence: f64,
    /// `None` uses the problem's natural reset factor.
    pub gamma: Option<f64>,
    pub arrival_range: (f64, f64),
    pub weight_range: (f64, f64),
    pub length_range: (f64, f64),
    /// Probability that an arrival copies an earlier one.
    pub repeat_arrival: f64,
    /// Probability that a machine cannot run a job.
    pub forbid_machine: f64,
}

impl GeneratorConfig {
    /// Defaults for `problem`: up to 5 jobs, 2 to 5 points, 2 machines, no precedence.
    pub fn new(problem: ProblemKind) -> Self {
        GeneratorConfig {
            problem,
            min_jobs: 1,
            max_jobs: 5,
            min_points: 2,
            max_points: 5,
            servers: 1,
            capacity: None,
            preemptive: false,
            machines: 2,
            precedence: 0.0,
            gamma: None,
            arrival_range: (0.05, 20.0),
            weight_range: (0.1, 10.0),
            length_range: (0.25, 4.0),
            repeat_arrival: 0.2,
            forbid_machine: 0.15,
        }
    }

    pub fn with_jobs(mut self, max_jobs: usize) -> Self {
        self.max_jobs = max_jobs;
        self.min_jobs = self.min_jobs.min(max_jobs);
        self
    }

    pub fn with_precedence(mut self, p: f64) -> Self {
        self.precedence = p;
        self
    }

    pub fn with_machines(mut self, machines: usize) -> Self {
        self.machines = machines;
        self
    }

    fn check(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.min_jobs == 0 || self.min_jobs > self.max_jobs {
            return bad("need 1 <= min_jobs <= max_jobs");
        }
        if self.min_points == 0 || self.min_points > self.max_points {
            return bad("need 1 <= min_points <= max_points");
        }
        if self.problem == ProblemKind::Darp && self.max_points < 2 {
            return bad("DARP needs at least two points");
        }
        for (lo, hi) in [self.arrival_range, self.weight_range, self.length_range] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return bad("ranges must satisfy 0 < lo <= hi < inf");
            }
        }
        for p in [self.precedence, self.repeat_arrival, self.forbid_machine] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn random_metric(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, points: usize) -> Result<MetricSpace> {
    let mut edges = Vec::new();
    for a in 0..points {
        for b in a + 1..points {
            edges.push((a, b, log_uniform(rng, cfg.length_range)));
        }
    }
    MetricSpace::from_edges(points, &edges, 0)
}

fn arrivals(rng: &mut ChaCha8Rng, cfg: &GeneratorConfig, n: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(n);
    for _ in 0..n {
        let a = if !out.is_empty() && rng.gen_bool(cfg.repeat_arrival) {
            out[rng.gen_range(0..out.len())]
        } else {
            log_uniform(rng, cfg.arrival_range)
        };
        out.push(a);
    }
    out
}

/// Instance number `index` for `seed`.
pub fn generate(cfg: &GeneratorConfig, seed: u64, index: u64) -> Result<Instance> {
    cfg.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let n = rng.gen_range(cfg.min_jobs..=cfg.max_jobs);
    let gamma = cfg.gamma.unwrap_or(cfg.problem.natural_gamma());
    let arrivals = arrivals(&mut rng, cfg, n);
    let mut jobs = Vec::with_capacity(n);
    let environment = match cfg.problem {
        ProblemKind::Trp | ProblemKind::Darp => {
            let lo = if cfg.problem == ProblemKind::Darp {
                cfg.min_points.max(2)
            } else {
                cfg.min_points
            };
            let points = rng.gen_range(lo..=cfg.max_points);
            let metric = random_metric(&mut rng, cfg, points)?;
            for &arrival in &arrivals {
                let weight = log_uniform(&mut rng, cfg.weight_range);
                let payload = if cfg.problem == ProblemKind::Trp {
                    Payload::Trp(TrpPayload {
                        location: rng.gen_range(0..points),
                    })
                } else {
                    let source = rng.gen_range(0..points);
                    let destination = (source + rng.gen_range(1..points)) % points;
                    Payload::Darp(DarpPayload { source, destination })
                };
                jobs.push(Job {
                    id: 0,
                    arrival,
                    weight,
                    payload,
                });
            }
            if cfg.problem == ProblemKind::Trp {
                Environment::Trp(TrpEnvironment {
                    metric,
                    servers: cfg.servers,
                })
            } else {
                Environment::Darp(DarpEnvironment {
                    metric,
                    servers: cfg.servers,
                    capacity: cfg.capacity,
                    preemptive: cfg.preemptive,
                })
            }
        }
        ProblemKind::Machines => {
            for (id, &arrival) in arrivals.iter().enumerate() {
                let weight = log_uniform(&mut rng, cfg.weight_range);
                let mut exec_times: Vec<f64> = (0..cfg.machines)
                    .map(|_| {
                        if rng.gen_bool(cfg.forbid_machine) {
                            f64::INFINITY
                        } else {
                            log_uniform(&mut rng, cfg.length_range)
                        }
                    })
                    .collect();
                if exec_times.iter().all(|t| t.is_infinite()) {
                    let m = rng.gen_range(0..cfg.machines);
                    exec_times[m] = log_uniform(&mut rng, cfg.length_range);
                }
                let predecessors = (0..id).filter(|_| rng.gen_bool(cfg.precedence)).collect();
                jobs.push(Job {
                    id,
                    arrival,
                    weight,
                    payload: Payload::Machine(MachinePayload {
                        exec_times,
                        predecessors,
                    }),
                });
            }
            Environment::Machines(MachinesEnvironment {
                machines: cfg.machines,
                preemptive: cfg.preemptive,
            })
        }
    };
    Instance::new(jobs, environment, gamma)
}

/// `count` instances, ids `0..count`.
pub fn generate_many(cfg: &GeneratorConfig, seed: u64, count: usize) -> Result<Vec<Instance>> {
    (0..count as u64).map(|i| generate(cfg, seed, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_index() {
        let cfg = GeneratorConfig::new(ProblemKind::Darp);
        let a = generate(&cfg, 7, 3).unwrap();
        let b = generate(&cfg, 7, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, generate(&cfg, 7, 4).unwrap());
        assert_eq!(generate_many(&cfg, 7, 5).unwrap()[3], a);
    }

    #[test]
    fn respects_sizes_and_ranges() {
        for problem in [ProblemKind::Trp, ProblemKind::Darp, ProblemKind::Machines] {
            let cfg = GeneratorConfig::new(problem).with_jobs(6).with_precedence(0.4);
            for inst in generate_many(&cfg, 11, 50).unwrap() {
                assert!((1..=6).contains(&inst.len()));
                assert_eq!(inst.gamma(), problem.natural_gamma());
                for job in inst.jobs() {
                    assert!(job.weight >= 0.1 && job.weight <= 10.0);
                    assert!(job.arrival >= 0.05 && job.arrival <= 20.0);
                    if let Payload::Machine(p) = &job.payload {
                        assert!(p.predecessors.iter().all(|&q| q < job.id));
                    }
                    if let Payload::Darp(p) = &job.payload {
                        assert_ne!(p.source, p.destination);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = GeneratorConfig::new(ProblemKind::Trp);
        cfg.min_jobs = 0;
        assert!(generate(&cfg, 0, 0).is_err());
    }
}
