//! JSON instance files.
//!
//! ```json
//! {
//!   "problem": "trp",
//!   "gamma": 1.0,
//!   "environment": {"metric": {"distances": [[0, 1], [1, 0]], "origin": 0}, "servers": 1},
//!   "jobs": [{"arrival": 0.0, "weight": 1.0, "payload": {"location": 1}}]
//! }
//! ```
//!
//! A metric may also be a graph, `{"points": 3, "edges": [[0, 1, 1.5], ...],
//! "origin": 0}`, closed under shortest paths. DARP environments add
//! `"capacity"` (absent or `null` for unbounded) and `"preemptive"`; machine
//! environments are `{"machines": m, "preemptive": false}` with job payloads
//! `{"exec_times": [1.0, null], "predecessors": [0]}`, `null` marking a
//! machine that cannot run the job. `gamma` defaults to the problem's
//! natural reset factor.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    DarpEnvironment, DarpPayload, Environment, Instance, Job, MachinePayload, MachinesEnvironment, Payload,
    ProblemKind, TrpEnvironment, TrpPayload,
};
use crate::problems::metric::MetricSpace;

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum MetricFile {
    Matrix {
        distances: Vec<Vec<f64>>,
        origin: usize,
    },
    Graph {
        points: usize,
        edges: Vec<(usize, usize, f64)>,
        origin: usize,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RoutingEnvFile {
    metric: MetricFile,
    #[serde(default = "one")]
    servers: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    capacity: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    preemptive: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MachinesEnvFile {
    machines: usize,
    #[serde(default)]
    preemptive: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PayloadFile {
    Trp {
        location: usize,
    },
    Darp {
        source: usize,
        destination: usize,
    },
    Machine {
        exec_times: Vec<Option<f64>>,
        #[serde(default)]
        predecessors: Vec<usize>,
    },
}

#[derive(Serialize, Deserialize)]
struct JobFile {
    arrival: f64,
    weight: f64,
    payload: PayloadFile,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    problem: ProblemKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    environment: serde_json::Value,
    jobs: Vec<JobFile>,
}

fn one() -> usize {
    1
}

fn metric_from(file: MetricFile) -> Result<MetricSpace> {
    match file {
        MetricFile::Matrix { distances, origin } => MetricSpace::from_matrix(distances, origin),
        MetricFile::Graph { points, edges, origin } => MetricSpace::from_edges(points, &edges, origin),
    }
}

/// Parses and validates an instance from JSON text.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text)?;
    let environment = match file.problem {
        ProblemKind::Trp | ProblemKind::Darp => {
            let env: RoutingEnvFile = serde_json::from_value(file.environment)?;
            let metric = metric_from(env.metric)?;
            if file.problem == ProblemKind::Trp {
                if env.capacity.is_some() || env.preemptive {
                    return Err(Error::InvalidInstance("TRP takes no capacity or preemption".into()));
                }
                Environment::Trp(TrpEnvironment {
                    metric,
                    servers: env.servers,
                })
            } else {
                Environment::Darp(DarpEnvironment {
                    metric,
                    servers: env.servers,
                    capacity: env.capacity,
                    preemptive: env.preemptive,
                })
            }
        }
        ProblemKind::Machines => {
            let env: MachinesEnvFile = serde_json::from_value(file.environment)?;
            Environment::Machines(MachinesEnvironment {
                machines: env.machines,
                preemptive: env.preemptive,
            })
        }
    };
    let jobs = file
        .jobs
        .into_iter()
        .enumerate()
        .map(|(id, j)| {
            let payload = match (file.problem, j.payload) {
                (ProblemKind::Trp, PayloadFile::Trp { location }) => Payload::Trp(TrpPayload { location }),
                (ProblemKind::Darp, PayloadFile::Darp { source, destination }) => {
                    Payload::Darp(DarpPayload { source, destination })
                }
                (
                    ProblemKind::Machines,
                    PayloadFile::Machine {
                        exec_times,
                        predecessors,
                    },
                ) => Payload::Machine(MachinePayload {
                    exec_times: exec_times.into_iter().map(|t| t.unwrap_or(f64::INFINITY)).collect(),
                    predecessors,
                }),
                (kind, _) => {
                    return Err(Error::InvalidInstance(format!(
                        "job {id}: payload does not match problem {kind}"
                    )))
                }
            };
            Ok(Job {
                id,
                arrival: j.arrival,
                weight: j.weight,
                payload,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let gamma = file.gamma.unwrap_or(file.problem.natural_gamma());
    Instance::new(jobs, environment, gamma)
}

/// Serializes an instance; metrics are written as distance matrices.
pub fn instance_to_json(instance: &Instance) -> Result<String> {
    let environment = match instance.environment() {
        Environment::Trp(e) => serde_json::to_value(RoutingEnvFile {
            metric: MetricFile::Matrix {
                distances: e.metric.rows(),
                origin: e.metric.origin(),
            },
            servers: e.servers,
            capacity: None,
            preemptive: false,
        })?,
        Environment::Darp(e) => serde_json::to_value(RoutingEnvFile {
            metric: MetricFile::Matrix {
                distances: e.metric.rows(),
                origin: e.metric.origin(),
            },
            servers: e.servers,
            capacity: e.capacity,
            preemptive: e.preemptive,
        })?,
        Environment::Machines(e) => serde_json::to_value(MachinesEnvFile {
            machines: e.machines,
            preemptive: e.preemptive,
        })?,
    };
    let jobs = instance
        .jobs()
        .iter()
        .map(|j| JobFile {
            arrival: j.arrival,
            weight: j.weight,
            payload: match &j.payload {
                Payload::Trp(p) => PayloadFile::Trp { location: p.location },
                Payload::Darp(p) => PayloadFile::Darp {
                    source: p.source,
                    destination: p.destination,
                },
                Payload::Machine(p) => PayloadFile::Machine {
                    exec_times: p.exec_times.iter().map(|&t| t.is_finite().then_some(t)).collect(),
                    predecessors: p.predecessors.clone(),
                },
            },
        })
        .collect();
    let file = InstanceFile {
        problem: instance.kind(),
        gamma: Some(instance.gamma()),
        environment,
        jobs,
    };
    Ok(serde_json::to_string_pretty(&file)?)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    std::fs::write(path, instance_to_json(instance)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_each_problem() {
        let texts = [
            r#"{"problem":"trp","environment":{"metric":{"distances":[[0,1],[1,0]],"origin":0}},
                "jobs":[{"arrival":0,"weight":2,"payload":{"location":1}}]}"#,
            r#"{"problem":"darp","gamma":1.5,"environment":{"metric":{"points":3,"edges":[[0,1,1],[1,2,2]],"origin":0},
                "servers":2,"capacity":1,"preemptive":true},
                "jobs":[{"arrival":1,"weight":1,"payload":{"source":1,"destination":2}}]}"#,
            r#"{"problem":"machines","environment":{"machines":2},
                "jobs":[{"arrival":0,"weight":1,"payload":{"exec_times":[1,null]}},
                        {"arrival":0,"weight":1,"payload":{"exec_times":[2,3],"predecessors":[0]}}]}"#,
        ];
        for text in texts {
            let inst = instance_from_json(text).unwrap();
            let again = instance_from_json(&instance_to_json(&inst).unwrap()).unwrap();
            assert_eq!(inst, again);
        }
        let darp = instance_from_json(texts[1]).unwrap();
        assert_eq!(darp.gamma(), 1.5);
        let Environment::Darp(env) = darp.environment() else {
            panic!()
        };
        assert_eq!(env.metric.d(0, 2), 3.0);
        assert_eq!(instance_from_json(texts[2]).unwrap().gamma(), 0.0);
    }

    #[test]
    fn rejects_mismatched_payload() {
        let text = r#"{"problem":"trp","environment":{"metric":{"distances":[[0,1],[1,0]],"origin":0}},
            "jobs":[{"arrival":0,"weight":1,"payload":{"source":0,"destination":1}}]}"#;
        assert!(instance_from_json(text).is_err());
    }
}
