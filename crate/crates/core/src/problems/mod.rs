//! Problem backends: TRP, DARP and unrelated machines.
//!
//! Each backend provides the earliest possible completion time `min(I)`, an
//! exact search for the cheapest schedule per completed job set, and a
//! feasibility check for auxiliary schedules.

pub mod metric;

mod machines;
mod routing;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    Action, ActionSchedule, Environment, Instance, JobId, JobSet, MachineRun, Payload, RouteStep, StepKind, TimePoint,
};
use crate::tol::{approx_le, ABS_TOL, REL_TOL};

use machines::MachineJob;
use routing::{Fleet, RoutingJob};

/// Size limits for exact enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub max_jobs: usize,
    pub max_points: usize,
    pub max_machines: usize,
    /// Job limit for preemptive machines and preemptive bounded-capacity DARP.
    pub max_preemptive_jobs: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_jobs: 8,
            max_points: 8,
            max_machines: 3,
            max_preemptive_jobs: 5,
        }
    }
}

impl OracleCaps {
    /// Fails with [`Error::TooLarge`] if `jobs` jobs of `instance` exceed the caps.
    pub fn check(&self, instance: &Instance, jobs: usize) -> Result<()> {
        let too_large = |what: String| Err(Error::TooLarge(what));
        let preemptive = match instance.environment() {
            Environment::Trp(env) if env.metric.len() > self.max_points => {
                return too_large(format!("{} points > {}", env.metric.len(), self.max_points))
            }
            Environment::Darp(env) if env.metric.len() > self.max_points => {
                return too_large(format!("{} points > {}", env.metric.len(), self.max_points))
            }
            Environment::Machines(env) if env.machines > self.max_machines => {
                return too_large(format!("{} machines > {}", env.machines, self.max_machines))
            }
            Environment::Trp(_) => false,
            Environment::Darp(env) => env.preemptive && env.capacity.is_some(),
            Environment::Machines(env) => env.preemptive,
        };
        if jobs > self.max_jobs {
            return too_large(format!("{jobs} jobs > {}", self.max_jobs));
        }
        if preemptive && jobs > self.max_preemptive_jobs {
            return too_large(format!("{jobs} jobs > {} (preemptive)", self.max_preemptive_jobs));
        }
        Ok(())
    }
}

/// The state an auxiliary schedule starts from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecutorState {
    /// Server positions (all at the origin after a reset).
    Routing { positions: Vec<usize> },
    /// Machines carry no state across a reset.
    Machines,
}

impl ExecutorState {
    pub fn initial(instance: &Instance) -> Self {
        match instance.environment() {
            Environment::Trp(env) => ExecutorState::Routing {
                positions: vec![env.metric.origin(); env.servers],
            },
            Environment::Darp(env) => ExecutorState::Routing {
                positions: vec![env.metric.origin(); env.servers],
            },
            Environment::Machines(_) => ExecutorState::Machines,
        }
    }
}

/// `min(I)`: the earliest time at which any job can be completed.
pub fn min_completion(instance: &Instance) -> Result<f64> {
    let env = instance.environment();
    let per_job = instance.jobs().iter().filter_map(|job| match (env, &job.payload) {
        (Environment::Trp(e), Payload::Trp(p)) => Some(job.arrival.max(e.metric.d(e.metric.origin(), p.location))),
        (Environment::Darp(e), Payload::Darp(p)) => {
            let o = e.metric.origin();
            Some(job.arrival.max(e.metric.d(o, p.source)) + e.metric.d(p.source, p.destination))
        }
        (Environment::Machines(_), Payload::Machine(p)) if p.predecessors.is_empty() => {
            Some(job.arrival + p.min_exec())
        }
        (Environment::Machines(_), Payload::Machine(_)) => None,
        _ => Some(f64::NAN),
    });
    let min = per_job.fold(f64::INFINITY, f64::min);
    if min.is_nan() || !min.is_finite() {
        return Err(Error::InvalidInstance(
            "cannot determine the earliest completion time".into(),
        ));
    }
    Ok(min)
}

/// Reset duration after a phase of length `tau`: `gamma * tau`.
pub fn reset_duration(tau: TimePoint, instance: &Instance) -> TimePoint {
    tau * instance.gamma()
}

/// Cheapest schedule completing exactly `set`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetOptimum {
    pub set: JobSet,
    pub cost: f64,
    pub completions: BTreeMap<JobId, f64>,
    pub actions: Vec<Action>,
}

/// For every subset of `jobs` that can be completed strictly before
/// `deadline` from the initial state, the cheapest schedule doing exactly
/// that. Ordered by ascending bit mask of the local job order.
pub fn subset_optima(
    instance: &Instance,
    jobs: JobSet,
    deadline: f64,
    caps: &OracleCaps,
) -> Result<Vec<SubsetOptimum>> {
    caps.check(instance, jobs.len())?;
    let ids: Vec<JobId> = jobs.iter().collect();
    if let Some(&bad) = ids.iter().find(|&&id| id >= instance.len()) {
        return Err(Error::UnknownJob(bad));
    }
    let to_set = |mask: u64| -> JobSet {
        ids.iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &id)| id)
            .collect()
    };
    match instance.environment() {
        Environment::Trp(_) | Environment::Darp(_) => {
            let (fleet, rjobs) = routing_inputs(instance, &ids);
            Ok(routing::subset_optima(fleet, &rjobs, deadline)
                .into_iter()
                .map(|o| {
                    let completions = route_completions(&o.steps);
                    SubsetOptimum {
                        set: to_set(o.set),
                        cost: o.cost,
                        completions,
                        actions: o.steps.into_iter().map(Action::Route).collect(),
                    }
                })
                .collect())
        }
        Environment::Machines(env) => {
            let mjobs = machine_inputs(instance, &ids);
            Ok(machines::subset_optima(env.machines, env.preemptive, &mjobs, deadline)
                .into_iter()
                .map(|o| SubsetOptimum {
                    set: to_set(o.set),
                    cost: o.cost,
                    completions: run_completions(&o.runs),
                    actions: o.runs.into_iter().map(Action::Run).collect(),
                })
                .collect())
        }
    }
}

/// Candidate `tau`-schedules over `arrived`: for every feasible completed
/// set, the cheapest schedule with that set. Any other `tau`-schedule has
/// `val` at least that of the candidate with the same completed set.
pub fn enumerate_schedules(
    arrived: JobSet,
    tau: TimePoint,
    instance: &Instance,
    caps: &OracleCaps,
) -> Result<impl Iterator<Item = ActionSchedule>> {
    let optima = subset_optima(instance, arrived, tau.value(), caps)?;
    Ok(optima.into_iter().map(move |o| ActionSchedule {
        duration: tau,
        completions: o.completions,
        actions: o.actions,
    }))
}

fn routing_inputs<'a>(instance: &'a Instance, ids: &[JobId]) -> (Fleet<'a>, Vec<RoutingJob>) {
    let fleet = match instance.environment() {
        Environment::Trp(e) => Fleet {
            metric: &e.metric,
            servers: e.servers,
            capacity: None,
            preemptive: false,
        },
        Environment::Darp(e) => Fleet {
            metric: &e.metric,
            servers: e.servers,
            capacity: e.capacity,
            preemptive: e.preemptive,
        },
        Environment::Machines(_) => unreachable!("routing backend on machine instance"),
    };
    let jobs = ids
        .iter()
        .map(|&id| {
            let job = &instance.jobs()[id];
            let (source, destination, serve_only) = match &job.payload {
                Payload::Trp(p) => (p.location, p.location, true),
                Payload::Darp(p) => (p.source, p.destination, false),
                Payload::Machine(_) => unreachable!("validated instance"),
            };
            RoutingJob {
                id,
                source,
                destination,
                arrival: job.arrival,
                weight: job.weight,
                serve_only,
            }
        })
        .collect();
    (fleet, jobs)
}

fn machine_inputs(instance: &Instance, ids: &[JobId]) -> Vec<MachineJob> {
    ids.iter()
        .map(|&id| {
            let job = &instance.jobs()[id];
            let Payload::Machine(p) = &job.payload else {
                unreachable!("validated instance")
            };
            let local: Vec<Option<usize>> = p
                .predecessors
                .iter()
                .map(|pr| ids.iter().position(|x| x == pr))
                .collect();
            MachineJob {
                id,
                arrival: job.arrival,
                weight: job.weight,
                exec: p.exec_times.clone(),
                blocked: local.iter().any(Option::is_none),
                preds: local.into_iter().flatten().collect(),
            }
        })
        .collect()
}

fn route_completions(steps: &[RouteStep]) -> BTreeMap<JobId, f64> {
    steps
        .iter()
        .filter_map(|s| match s.kind {
            StepKind::Serve(j) | StepKind::Deliver(j) => Some((j, s.time)),
            _ => None,
        })
        .collect()
}

fn run_completions(runs: &[MachineRun]) -> BTreeMap<JobId, f64> {
    let mut out = BTreeMap::new();
    for r in runs {
        let e = out.entry(r.job).or_insert(r.end);
        *e = f64::max(*e, r.end);
    }
    out
}

/// Which feasibility rule a schedule breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    WrongActionKind,
    UnknownTarget,
    Travel,
    BeforeArrival,
    Capacity,
    ObjectState,
    Deadline,
    Overlap,
    Precedence,
    Preemption,
    Processing,
    CompletionMismatch,
}

/// Why a schedule is infeasible.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub job: Option<JobId>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.job {
            Some(j) => write!(f, "{:?} (job {j}): {}", self.rule, self.detail),
            None => write!(f, "{:?}: {}", self.rule, self.detail),
        }
    }
}

fn violation<T>(rule: Rule, job: Option<JobId>, detail: impl Into<String>) -> std::result::Result<T, Violation> {
    Err(Violation {
        rule,
        job,
        detail: detail.into(),
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ABS_TOL + REL_TOL * a.abs().max(b.abs())
}

/// Checks that `schedule` is a feasible schedule of its duration started
/// from `start`: every completion lies strictly before the duration, and the
/// recorded completion times match the actions.
pub fn validate_schedule(
    schedule: &ActionSchedule,
    instance: &Instance,
    start: &ExecutorState,
) -> std::result::Result<(), Violation> {
    let duration = schedule.duration.value();
    let completions = match (instance.environment(), start) {
        (Environment::Trp(_) | Environment::Darp(_), ExecutorState::Routing { positions }) => {
            validate_route(schedule, instance, positions)?
        }
        (Environment::Machines(_), ExecutorState::Machines) => validate_runs(schedule, instance)?,
        _ => return violation(Rule::WrongActionKind, None, "start state does not match the problem"),
    };
    for (&job, &c) in &completions {
        if c >= duration {
            return violation(
                Rule::Deadline,
                Some(job),
                format!("completes at {c}, not before {duration}"),
            );
        }
    }
    let recorded: Vec<JobId> = schedule.completions.keys().copied().collect();
    let actual: Vec<JobId> = completions.keys().copied().collect();
    if recorded != actual {
        return violation(
            Rule::CompletionMismatch,
            None,
            format!("recorded completed jobs {recorded:?}, actions complete {actual:?}"),
        );
    }
    for (&job, &c) in &completions {
        if !close(c, schedule.completions[&job]) {
            return violation(
                Rule::CompletionMismatch,
                Some(job),
                format!(
                    "recorded completion {} but actions give {c}",
                    schedule.completions[&job]
                ),
            );
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq)]
enum Object {
    Waiting,
    OnBoard(usize),
    Dropped { point: usize, time: f64 },
    Done,
}

fn validate_route(
    schedule: &ActionSchedule,
    instance: &Instance,
    positions: &[usize],
) -> std::result::Result<BTreeMap<JobId, f64>, Violation> {
    let (metric, capacity, preemptive, is_trp) = match instance.environment() {
        Environment::Trp(e) => (&e.metric, None, false, true),
        Environment::Darp(e) => (&e.metric, e.capacity, e.preemptive, false),
        Environment::Machines(_) => unreachable!(),
    };
    let mut steps: Vec<(usize, RouteStep)> = Vec::new();
    for (idx, action) in schedule.actions.iter().enumerate() {
        match action {
            Action::Route(s) => steps.push((idx, *s)),
            Action::Run(_) => return violation(Rule::WrongActionKind, None, "machine run in a routing schedule"),
        }
    }
    // chronological, stable in listing order for simultaneous steps
    steps.sort_by(|a, b| a.1.time.total_cmp(&b.1.time).then(a.0.cmp(&b.0)));
    let mut pos = positions.to_vec();
    let mut clock = vec![0.0f64; positions.len()];
    let mut load = vec![0usize; positions.len()];
    let mut objects = vec![Object::Waiting; instance.len()];
    let mut done = BTreeMap::new();
    for (_, s) in steps {
        let j = s.kind.job();
        if s.server >= pos.len() {
            return violation(
                Rule::UnknownTarget,
                Some(j),
                format!("server {} does not exist", s.server),
            );
        }
        if s.point >= metric.len() {
            return violation(Rule::UnknownTarget, Some(j), format!("point {} not in metric", s.point));
        }
        let job = instance.job(j).map_err(|_| Violation {
            rule: Rule::UnknownTarget,
            job: Some(j),
            detail: "unknown job".into(),
        })?;
        let srv = s.server;
        let earliest = clock[srv] + metric.d(pos[srv], s.point);
        if !approx_le(earliest, s.time) || s.time < 0.0 {
            return violation(
                Rule::Travel,
                Some(j),
                format!(
                    "server {srv} cannot reach point {} by {} (earliest {earliest})",
                    s.point, s.time
                ),
            );
        }
        let (source, destination) = match &job.payload {
            Payload::Trp(p) => (p.location, p.location),
            Payload::Darp(p) => (p.source, p.destination),
            Payload::Machine(_) => unreachable!(),
        };
        match s.kind {
            StepKind::Serve(_) => {
                if !is_trp {
                    return violation(Rule::WrongActionKind, Some(j), "serve step in a DARP schedule");
                }
                if objects[j] != Object::Waiting {
                    return violation(Rule::ObjectState, Some(j), "served twice");
                }
                if s.point != source {
                    return violation(Rule::ObjectState, Some(j), "served away from its location");
                }
                if !approx_le(job.arrival, s.time) {
                    return violation(
                        Rule::BeforeArrival,
                        Some(j),
                        format!("served at {} before arrival {}", s.time, job.arrival),
                    );
                }
                objects[j] = Object::Done;
                done.insert(j, s.time);
            }
            StepKind::Pickup(_) => {
                if is_trp {
                    return violation(Rule::WrongActionKind, Some(j), "pickup step in a TRP schedule");
                }
                match objects[j] {
                    Object::Waiting => {
                        if s.point != source {
                            return violation(Rule::ObjectState, Some(j), "picked up away from its source");
                        }
                        if !approx_le(job.arrival, s.time) {
                            return violation(
                                Rule::BeforeArrival,
                                Some(j),
                                format!("picked up at {} before arrival {}", s.time, job.arrival),
                            );
                        }
                    }
                    Object::Dropped { point, time } => {
                        if s.point != point || !approx_le(time, s.time) {
                            return violation(Rule::ObjectState, Some(j), "picked up where it was not dropped");
                        }
                    }
                    _ => return violation(Rule::ObjectState, Some(j), "picked up while not waiting"),
                }
                if capacity.is_some_and(|c| load[srv] + 1 > c) {
                    return violation(Rule::Capacity, Some(j), format!("server {srv} over capacity"));
                }
                load[srv] += 1;
                objects[j] = Object::OnBoard(srv);
            }
            StepKind::Drop(_) | StepKind::Deliver(_) => {
                if is_trp {
                    return violation(Rule::WrongActionKind, Some(j), "drop step in a TRP schedule");
                }
                if objects[j] != Object::OnBoard(srv) {
                    return violation(Rule::ObjectState, Some(j), format!("not on board server {srv}"));
                }
                load[srv] -= 1;
                if let StepKind::Deliver(_) = s.kind {
                    if s.point != destination {
                        return violation(Rule::ObjectState, Some(j), "delivered away from its destination");
                    }
                    objects[j] = Object::Done;
                    done.insert(j, s.time);
                } else {
                    if !preemptive {
                        return violation(Rule::Preemption, Some(j), "intermediate drop without preemption");
                    }
                    objects[j] = Object::Dropped {
                        point: s.point,
                        time: s.time,
                    };
                }
            }
        }
        pos[srv] = s.point;
        clock[srv] = s.time;
    }
    if let Some(j) = objects
        .iter()
        .position(|o| matches!(o, Object::OnBoard(_) | Object::Dropped { .. }))
    {
        return violation(Rule::ObjectState, Some(j), "left in transit at the end of the schedule");
    }
    Ok(done)
}

fn validate_runs(
    schedule: &ActionSchedule,
    instance: &Instance,
) -> std::result::Result<BTreeMap<JobId, f64>, Violation> {
    let Environment::Machines(env) = instance.environment() else {
        unreachable!()
    };
    let mut runs: Vec<MachineRun> = Vec::new();
    for action in &schedule.actions {
        match action {
            Action::Run(r) => runs.push(*r),
            Action::Route(_) => return violation(Rule::WrongActionKind, None, "route step in a machine schedule"),
        }
    }
    for r in &runs {
        if r.machine >= env.machines || r.job >= instance.len() {
            return violation(
                Rule::UnknownTarget,
                Some(r.job),
                format!("run on machine {} of job {}", r.machine, r.job),
            );
        }
        if !(r.start >= 0.0 && r.end > r.start) {
            return violation(
                Rule::Processing,
                Some(r.job),
                format!("bad interval [{}, {})", r.start, r.end),
            );
        }
    }
    let overlapping = |mut v: Vec<&MachineRun>| -> Option<(JobId, f64)> {
        v.sort_by(|a, b| a.start.total_cmp(&b.start));
        v.windows(2)
            .find(|w| !approx_le(w[0].end, w[1].start))
            .map(|w| (w[1].job, w[1].start))
    };
    for k in 0..env.machines {
        if let Some((j, t)) = overlapping(runs.iter().filter(|r| r.machine == k).collect()) {
            return violation(Rule::Overlap, Some(j), format!("machine {k} busy at {t}"));
        }
    }
    let mut done = BTreeMap::new();
    for j in 0..instance.len() {
        let mine: Vec<&MachineRun> = runs.iter().filter(|r| r.job == j).collect();
        if mine.is_empty() {
            continue;
        }
        if !env.preemptive && mine.len() > 1 {
            return violation(
                Rule::Preemption,
                Some(j),
                format!("{} pieces without preemption", mine.len()),
            );
        }
        if overlapping(mine.clone()).is_some() {
            return violation(Rule::Overlap, Some(j), "runs on two machines at once");
        }
        let Payload::Machine(p) = &instance.jobs()[j].payload else {
            unreachable!()
        };
        let mut fraction = 0.0;
        for r in &mine {
            let e = p.exec_times[r.machine];
            if !e.is_finite() {
                return violation(
                    Rule::Processing,
                    Some(j),
                    format!("cannot run on machine {}", r.machine),
                );
            }
            fraction += (r.end - r.start) / e;
        }
        if !close(fraction, 1.0) {
            return violation(
                Rule::Processing,
                Some(j),
                format!("processed fraction {fraction}, expected 1"),
            );
        }
        let first = mine.iter().map(|r| r.start).fold(f64::INFINITY, f64::min);
        if !approx_le(instance.jobs()[j].arrival, first) {
            return violation(
                Rule::BeforeArrival,
                Some(j),
                format!("starts at {first} before arrival"),
            );
        }
        done.insert(j, mine.iter().map(|r| r.end).fold(0.0, f64::max));
    }
    for &j in done.keys() {
        let Payload::Machine(p) = &instance.jobs()[j].payload else {
            unreachable!()
        };
        let first = runs
            .iter()
            .filter(|r| r.job == j)
            .map(|r| r.start)
            .fold(f64::INFINITY, f64::min);
        for &pr in &p.predecessors {
            match done.get(&pr) {
                Some(&c) if approx_le(c, first) => {}
                Some(&c) => {
                    return violation(
                        Rule::Precedence,
                        Some(j),
                        format!("starts at {first} before predecessor {pr} ends at {c}"),
                    )
                }
                None => return violation(Rule::Precedence, Some(j), format!("predecessor {pr} is not completed")),
            }
        }
    }
    Ok(done)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        DarpEnvironment, DarpPayload, Job, MachinePayload, MachinesEnvironment, TrpEnvironment, TrpPayload,
    };
    use metric::MetricSpace;

    fn trp_instance() -> Instance {
        let metric = MetricSpace::line(&[0.0, 1.0, 3.0], 0).unwrap();
        let jobs = vec![
            Job {
                id: 0,
                arrival: 0.0,
                weight: 1.0,
                payload: Payload::Trp(TrpPayload { location: 1 }),
            },
            Job {
                id: 0,
                arrival: 2.0,
                weight: 2.0,
                payload: Payload::Trp(TrpPayload { location: 2 }),
            },
        ];
        Instance::new(jobs, Environment::Trp(TrpEnvironment { metric, servers: 1 }), 1.0).unwrap()
    }

    #[test]
    fn min_completion_per_problem() {
        assert_eq!(min_completion(&trp_instance()).unwrap(), 1.0);
        let metric = MetricSpace::line(&[0.0, 1.0, 3.0], 0).unwrap();
        let darp = Instance::new(
            vec![Job {
                id: 0,
                arrival: 5.0,
                weight: 1.0,
                payload: Payload::Darp(DarpPayload {
                    source: 1,
                    destination: 2,
                }),
            }],
            Environment::Darp(DarpEnvironment {
                metric,
                servers: 1,
                capacity: None,
                preemptive: false,
            }),
            1.0,
        )
        .unwrap();
        // wait for the arrival at the source, then drive
        assert_eq!(min_completion(&darp).unwrap(), 7.0);
        let mach = |exec: Vec<f64>, preds: Vec<usize>, a: f64| Job {
            id: 0,
            arrival: a,
            weight: 1.0,
            payload: Payload::Machine(MachinePayload {
                exec_times: exec,
                predecessors: preds,
            }),
        };
        let m = Instance::new(
            vec![mach(vec![3.0, 2.0], vec![], 1.0), mach(vec![0.5, 0.5], vec![0], 0.0)],
            Environment::Machines(MachinesEnvironment {
                machines: 2,
                preemptive: false,
            }),
            0.0,
        )
        .unwrap();
        assert_eq!(min_completion(&m).unwrap(), 3.0);
    }

    #[test]
    fn enumerated_schedules_are_feasible() {
        let inst = trp_instance();
        let tau = TimePoint::new(6.0).unwrap();
        let start = ExecutorState::initial(&inst);
        let all: Vec<_> = enumerate_schedules(inst.all_jobs(), tau, &inst, &OracleCaps::default())
            .unwrap()
            .collect();
        assert_eq!(all.len(), 4);
        for s in &all {
            validate_schedule(s, &inst, &start).unwrap();
        }
    }

    #[test]
    fn validator_reports_rules() {
        let inst = trp_instance();
        let start = ExecutorState::initial(&inst);
        let step = |t: f64, p: usize, j: usize| {
            Action::Route(RouteStep {
                server: 0,
                point: p,
                time: t,
                kind: StepKind::Serve(j),
            })
        };
        let mk = |actions: Vec<Action>, c: &[(usize, f64)], d: f64| ActionSchedule {
            duration: TimePoint::new(d).unwrap(),
            completions: c.iter().copied().collect(),
            actions,
        };
        let err = validate_schedule(&mk(vec![step(0.5, 1, 0)], &[(0, 0.5)], 5.0), &inst, &start).unwrap_err();
        assert_eq!(err.rule, Rule::Travel);
        let err = validate_schedule(&mk(vec![step(3.0, 2, 1)], &[(1, 3.0)], 3.0), &inst, &start).unwrap_err();
        assert_eq!(err.rule, Rule::Deadline);
        let err = validate_schedule(&mk(vec![step(1.0, 1, 0)], &[(0, 2.0)], 5.0), &inst, &start).unwrap_err();
        assert_eq!(err.rule, Rule::CompletionMismatch);
        validate_schedule(
            &mk(vec![step(1.0, 1, 0), step(3.0, 2, 1)], &[(0, 1.0), (1, 3.0)], 5.0),
            &inst,
            &start,
        )
        .unwrap();
    }

    #[test]
    fn caps_reject_large_instances() {
        let inst = trp_instance();
        let caps = OracleCaps {
            max_jobs: 1,
            ..OracleCaps::default()
        };
        assert!(matches!(
            subset_optima(&inst, inst.all_jobs(), 10.0, &caps),
            Err(Error::TooLarge(_))
        ));
    }
}
