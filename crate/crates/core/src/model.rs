//! Problem-agnostic data model: jobs, instances, auxiliary schedules and the
//! cost functions every backend shares.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problems::metric::MetricSpace;
use crate::tol::kahan_sum;

/// Dense job identifier, equal to the job's position in the input.
pub type JobId = usize;

/// Largest number of jobs an [`Instance`] may hold (width of [`JobSet`]).
pub const MAX_JOBS: usize = 64;

/// A non-negative point in time (or duration).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimePoint(f64);

impl TimePoint {
    pub const ZERO: TimePoint = TimePoint(0.0);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value < 0.0 {
            return Err(Error::InvalidParameter(format!("time must be >= 0, got {value}")));
        }
        Ok(TimePoint(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Eq for TimePoint {}

impl PartialOrd for TimePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TimePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl Add for TimePoint {
    type Output = TimePoint;
    fn add(self, rhs: TimePoint) -> TimePoint {
        TimePoint(self.0 + rhs.0)
    }
}

impl Mul<f64> for TimePoint {
    type Output = TimePoint;
    fn mul(self, rhs: f64) -> TimePoint {
        debug_assert!(rhs >= 0.0);
        TimePoint(self.0 * rhs)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of job ids, stored as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct JobSet(u64);

impl JobSet {
    pub const EMPTY: JobSet = JobSet(0);

    pub fn from_bits(bits: u64) -> Self {
        JobSet(bits)
    }

    /// All ids `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_JOBS);
        if n == MAX_JOBS {
            JobSet(u64::MAX)
        } else {
            JobSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(id: JobId) -> Self {
        JobSet(1u64 << id)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, id: JobId) -> bool {
        id < MAX_JOBS && self.0 & (1u64 << id) != 0
    }

    pub fn insert(&mut self, id: JobId) {
        self.0 |= 1u64 << id;
    }

    pub fn remove(&mut self, id: JobId) {
        self.0 &= !(1u64 << id);
    }

    pub fn with(self, id: JobId) -> Self {
        JobSet(self.0 | (1u64 << id))
    }

    pub fn union(self, other: JobSet) -> Self {
        JobSet(self.0 | other.0)
    }

    pub fn intersection(self, other: JobSet) -> Self {
        JobSet(self.0 & other.0)
    }

    pub fn difference(self, other: JobSet) -> Self {
        JobSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: JobSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Ids in ascending order.
    pub fn iter(self) -> impl Iterator<Item = JobId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let id = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(id)
            }
        })
    }

    /// Lexicographic order of the ascending id lists.
    pub fn lex_cmp(self, other: JobSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Debug for JobSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<JobId> for JobSet {
    fn from_iter<T: IntoIterator<Item = JobId>>(iter: T) -> Self {
        let mut s = JobSet::EMPTY;
        for id in iter {
            s.insert(id);
        }
        s
    }
}

impl Serialize for JobSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for JobSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let ids = Vec::<JobId>::deserialize(deserializer)?;
        if let Some(bad) = ids.iter().find(|&&id| id >= MAX_JOBS) {
            return Err(serde::de::Error::custom(format!("job id {bad} out of range")));
        }
        Ok(ids.into_iter().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Trp,
    Darp,
    Machines,
}

impl ProblemKind {
    /// Smallest reset factor the problem supports.
    pub fn natural_gamma(self) -> f64 {
        match self {
            ProblemKind::Trp | ProblemKind::Darp => 1.0,
            ProblemKind::Machines => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Trp => "trp",
            ProblemKind::Darp => "darp",
            ProblemKind::Machines => "machines",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrpPayload {
    pub location: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DarpPayload {
    pub source: usize,
    pub destination: usize,
}

/// Execution time per machine (`f64::INFINITY` = cannot run there) and the
/// ids that must complete before the job may start.
#[derive(Clone, Debug, PartialEq)]
pub struct MachinePayload {
    pub exec_times: Vec<f64>,
    pub predecessors: Vec<JobId>,
}

impl MachinePayload {
    pub fn min_exec(&self) -> f64 {
        self.exec_times.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Trp(TrpPayload),
    Darp(DarpPayload),
    Machine(MachinePayload),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    pub id: JobId,
    pub arrival: f64,
    pub weight: f64,
    pub payload: Payload,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrpEnvironment {
    pub metric: MetricSpace,
    pub servers: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarpEnvironment {
    pub metric: MetricSpace,
    pub servers: usize,
    /// `None` is unbounded capacity.
    pub capacity: Option<usize>,
    pub preemptive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MachinesEnvironment {
    pub machines: usize,
    pub preemptive: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Environment {
    Trp(TrpEnvironment),
    Darp(DarpEnvironment),
    Machines(MachinesEnvironment),
}

impl Environment {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Environment::Trp(_) => ProblemKind::Trp,
            Environment::Darp(_) => ProblemKind::Darp,
            Environment::Machines(_) => ProblemKind::Machines,
        }
    }
}

/// A validated problem instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    jobs: Vec<Job>,
    environment: Environment,
    gamma: f64,
}

impl Instance {
    /// Validates and builds an instance. Job ids are reassigned to input order.
    pub fn new(mut jobs: Vec<Job>, environment: Environment, gamma: f64) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidInstance(msg));
        if jobs.is_empty() {
            return Err(Error::EmptyInstance);
        }
        if jobs.len() > MAX_JOBS {
            return bad(format!("at most {MAX_JOBS} jobs supported, got {}", jobs.len()));
        }
        let kind = environment.kind();
        if !gamma.is_finite() || gamma < kind.natural_gamma() {
            return bad(format!(
                "gamma {gamma} is below the reset factor {} of {kind}",
                kind.natural_gamma()
            ));
        }
        match &environment {
            Environment::Trp(env) if env.servers == 0 => return bad("servers must be >= 1".into()),
            Environment::Darp(env) if env.servers == 0 => return bad("servers must be >= 1".into()),
            Environment::Darp(env) if env.capacity == Some(0) => return bad("capacity must be >= 1".into()),
            Environment::Machines(env) if env.machines == 0 => return bad("machines must be >= 1".into()),
            _ => {}
        }
        let n = jobs.len();
        for (idx, job) in jobs.iter_mut().enumerate() {
            job.id = idx;
            if !(job.weight.is_finite() && job.weight > 0.0) {
                return bad(format!("job {idx}: weight must be positive, got {}", job.weight));
            }
            if !(job.arrival.is_finite() && job.arrival >= 0.0) {
                return bad(format!("job {idx}: arrival must be >= 0, got {}", job.arrival));
            }
            match (&environment, &job.payload) {
                (Environment::Trp(env), Payload::Trp(p)) => {
                    if p.location >= env.metric.len() {
                        return bad(format!("job {idx}: location {} not in metric", p.location));
                    }
                }
                (Environment::Darp(env), Payload::Darp(p)) => {
                    if p.source >= env.metric.len() || p.destination >= env.metric.len() {
                        return bad(format!("job {idx}: endpoint not in metric"));
                    }
                }
                (Environment::Machines(env), Payload::Machine(p)) => {
                    if p.exec_times.len() != env.machines {
                        return bad(format!(
                            "job {idx}: {} execution times for {} machines",
                            p.exec_times.len(),
                            env.machines
                        ));
                    }
                    if p.exec_times.iter().any(|&t| t.is_nan() || t <= 0.0) {
                        return bad(format!("job {idx}: execution times must be positive"));
                    }
                    if !p.min_exec().is_finite() {
                        return bad(format!("job {idx}: no machine can execute the job"));
                    }
                    if let Some(&bad_pred) = p.predecessors.iter().find(|&&pr| pr >= n || pr == idx) {
                        return bad(format!("job {idx}: invalid predecessor {bad_pred}"));
                    }
                }
                _ => return bad(format!("job {idx}: payload does not match problem {kind}")),
            }
        }
        if kind == ProblemKind::Machines && has_precedence_cycle(&jobs) {
            return bad("precedence relation has a cycle".into());
        }
        let instance = Instance {
            jobs,
            environment,
            gamma,
        };
        let min = crate::problems::min_completion(&instance)?;
        if min.is_nan() || min <= 0.0 {
            return bad("earliest possible completion time must be positive".into());
        }
        Ok(instance)
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    pub fn job(&self, id: JobId) -> Result<&Job> {
        self.jobs.get(id).ok_or(Error::UnknownJob(id))
    }

    pub fn len(&self) -> usize {
        self.jobs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jobs.is_empty()
    }

    pub fn environment(&self) -> &Environment {
        &self.environment
    }

    pub fn kind(&self) -> ProblemKind {
        self.environment.kind()
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The same jobs and environment with another reset factor.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Instance::new(self.jobs.clone(), self.environment.clone(), gamma)
    }

    pub fn all_jobs(&self) -> JobSet {
        JobSet::full(self.jobs.len())
    }

    /// Jobs with `arrival <= tau` (the set `I_tau`).
    pub fn arrived_by(&self, tau: f64) -> JobSet {
        self.jobs.iter().filter(|j| j.arrival <= tau).map(|j| j.id).collect()
    }

    pub fn total_weight(&self) -> f64 {
        kahan_sum(self.jobs.iter().map(|j| j.weight))
    }

    fn check_ids(&self, set: JobSet) -> Result<()> {
        match set.iter().find(|&id| id >= self.jobs.len()) {
            Some(id) => Err(Error::UnknownJob(id)),
            None => Ok(()),
        }
    }
}

fn has_precedence_cycle(jobs: &[Job]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    fn visit(v: usize, jobs: &[Job], state: &mut [u8]) -> bool {
        state[v] = 1;
        if let Payload::Machine(p) = &jobs[v].payload {
            for &u in &p.predecessors {
                if state[u] == 1 || (state[u] == 0 && visit(u, jobs, state)) {
                    return true;
                }
            }
        }
        state[v] = 2;
        false
    }
    let mut state = vec![0u8; jobs.len()];
    (0..jobs.len()).any(|v| state[v] == 0 && visit(v, jobs, &mut state))
}

/// What a route step does at its point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// TRP service.
    Serve(JobId),
    Pickup(JobId),
    /// Intermediate drop (preemptive DARP only).
    Drop(JobId),
    /// Final drop at the destination; completes the job.
    Deliver(JobId),
}

impl StepKind {
    pub fn job(self) -> JobId {
        match self {
            StepKind::Serve(j) | StepKind::Pickup(j) | StepKind::Drop(j) | StepKind::Deliver(j) => j,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteStep {
    pub server: usize,
    pub point: usize,
    pub time: f64,
    pub kind: StepKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MachineRun {
    pub machine: usize,
    pub job: JobId,
    pub start: f64,
    pub end: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Route(RouteStep),
    Run(MachineRun),
}

/// An auxiliary schedule of fixed duration started from the initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSchedule {
    pub duration: TimePoint,
    /// Completion offset of every job the schedule completes.
    pub completions: BTreeMap<JobId, f64>,
    pub actions: Vec<Action>,
}

impl ActionSchedule {
    /// The schedule that does nothing for `duration`.
    pub fn empty(duration: TimePoint) -> Self {
        ActionSchedule {
            duration,
            completions: BTreeMap::new(),
            actions: Vec::new(),
        }
    }

    /// `R(A)`.
    pub fn completed(&self) -> JobSet {
        self.completions.keys().copied().collect()
    }

    pub fn completion(&self, id: JobId) -> Option<f64> {
        self.completions.get(&id).copied()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub total: f64,
    pub per_job: BTreeMap<JobId, f64>,
}

impl CostBreakdown {
    /// Builds the breakdown from completion times.
    pub fn from_completions(instance: &Instance, completions: &BTreeMap<JobId, f64>) -> Result<Self> {
        let mut per_job = BTreeMap::new();
        for (&id, &t) in completions {
            per_job.insert(id, instance.job(id)?.weight * t);
        }
        let total = kahan_sum(per_job.values().copied());
        Ok(CostBreakdown { total, per_job })
    }
}

/// `w(R)`.
pub fn weight_of(set: JobSet, instance: &Instance) -> Result<f64> {
    instance.check_ids(set)?;
    Ok(kahan_sum(set.iter().map(|id| instance.jobs[id].weight)))
}

/// `cost_A(R) = sum of w(r) * C_r(A)` over `subset`, which must be completed by `schedule`.
pub fn schedule_cost(schedule: &ActionSchedule, subset: JobSet, instance: &Instance) -> Result<f64> {
    instance.check_ids(subset)?;
    let mut terms = Vec::with_capacity(subset.len());
    for id in subset.iter() {
        let c = schedule.completion(id).ok_or(Error::NotCompleted(id))?;
        terms.push(instance.jobs[id].weight * c);
    }
    Ok(kahan_sum(terms))
}

/// `val_tau(A) = cost_A(R(A)) + tau * w(I_tau \ R(A))`.
pub fn val(schedule: &ActionSchedule, tau: TimePoint, arrived: JobSet, instance: &Instance) -> Result<f64> {
    if schedule.duration != tau {
        return Err(Error::DurationMismatch {
            expected: tau.value(),
            found: schedule.duration.value(),
        });
    }
    instance.check_ids(arrived)?;
    let done = schedule.completed();
    if let Some(id) = done.difference(arrived).iter().next() {
        return Err(Error::Inconsistent(format!(
            "job {id} completed but not arrived by tau"
        )));
    }
    let served = schedule_cost(schedule, done, instance)?;
    let penalty = weight_of(arrived.difference(done), instance)?;
    Ok(served + tau.value() * penalty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::metric::MetricSpace;

    fn trp(weights: &[f64]) -> Instance {
        let metric = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0).unwrap();
        let jobs = weights
            .iter()
            .map(|&w| Job {
                id: 0,
                arrival: 0.0,
                weight: w,
                payload: Payload::Trp(TrpPayload { location: 1 }),
            })
            .collect();
        Instance::new(jobs, Environment::Trp(TrpEnvironment { metric, servers: 1 }), 1.0).unwrap()
    }

    fn with_completions(tau: f64, c: &[(JobId, f64)]) -> ActionSchedule {
        ActionSchedule {
            duration: TimePoint::new(tau).unwrap(),
            completions: c.iter().copied().collect(),
            actions: vec![],
        }
    }

    #[test]
    fn weight_of_examples() {
        let inst = trp(&[2.0, 3.0, 0.25]);
        assert_eq!(weight_of(JobSet::EMPTY, &inst).unwrap(), 0.0);
        assert_eq!(weight_of([0, 1].into_iter().collect(), &inst).unwrap(), 5.0);
        assert_eq!(weight_of(JobSet::singleton(2), &inst).unwrap(), 0.25);
        assert!(matches!(
            weight_of(JobSet::singleton(7), &inst),
            Err(Error::UnknownJob(7))
        ));
    }

    #[test]
    fn schedule_cost_examples() {
        let inst = trp(&[1.0, 2.0]);
        let s = with_completions(4.0, &[(0, 1.0), (1, 3.0)]);
        assert_eq!(schedule_cost(&s, JobSet::EMPTY, &inst).unwrap(), 0.0);
        assert_eq!(schedule_cost(&s, JobSet::singleton(0), &inst).unwrap(), 1.0);
        assert_eq!(schedule_cost(&s, s.completed(), &inst).unwrap(), 7.0);
        let partial = with_completions(4.0, &[(0, 1.0)]);
        assert!(matches!(
            schedule_cost(&partial, JobSet::singleton(1), &inst),
            Err(Error::NotCompleted(1))
        ));
    }

    #[test]
    fn val_examples() {
        let one = trp(&[1.0]);
        let tau = TimePoint::new(2.0).unwrap();
        assert_eq!(
            val(&ActionSchedule::empty(tau), tau, JobSet::singleton(0), &one).unwrap(),
            2.0
        );
        let s = with_completions(2.0, &[(0, 1.0)]);
        assert_eq!(val(&s, tau, JobSet::singleton(0), &one).unwrap(), 1.0);

        let two = trp(&[1.0, 1.0]);
        let tau3 = TimePoint::new(3.0).unwrap();
        let s = with_completions(3.0, &[(0, 0.5)]);
        assert_eq!(val(&s, tau3, two.all_jobs(), &two).unwrap(), 3.5);

        let wrong = with_completions(2.5, &[]);
        assert!(matches!(
            val(&wrong, tau3, two.all_jobs(), &two),
            Err(Error::DurationMismatch { .. })
        ));
    }

    #[test]
    fn jobset_basics() {
        let s: JobSet = [3, 1, 5].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(JobSet::singleton(3).is_subset(s));
        assert_eq!(JobSet::full(3).difference(s).iter().collect::<Vec<_>>(), vec![0, 2]);
        let a: JobSet = [0, 4].into_iter().collect();
        let b: JobSet = [1].into_iter().collect();
        assert_eq!(a.lex_cmp(b), Ordering::Less);
    }

    #[test]
    fn rejects_bad_instances() {
        let metric = MetricSpace::from_matrix(vec![vec![0.0, 1.0], vec![1.0, 0.0]], 0).unwrap();
        let env = Environment::Trp(TrpEnvironment { metric, servers: 1 });
        let job = |w: f64, loc: usize, a: f64| Job {
            id: 0,
            arrival: a,
            weight: w,
            payload: Payload::Trp(TrpPayload { location: loc }),
        };
        assert!(Instance::new(vec![], env.clone(), 1.0).is_err());
        assert!(Instance::new(vec![job(0.0, 1, 0.0)], env.clone(), 1.0).is_err());
        assert!(Instance::new(vec![job(1.0, 5, 0.0)], env.clone(), 1.0).is_err());
        // gamma below the problem's reset factor
        assert!(Instance::new(vec![job(1.0, 1, 0.0)], env.clone(), 0.5).is_err());
        // request at the origin at time 0 makes min(I) = 0
        assert!(Instance::new(vec![job(1.0, 0, 0.0)], env.clone(), 1.0).is_err());
        assert!(Instance::new(vec![job(1.0, 0, 0.5)], env, 1.0).is_ok());
    }

    #[test]
    fn rejects_precedence_cycle() {
        let job = |preds: Vec<usize>| Job {
            id: 0,
            arrival: 0.0,
            weight: 1.0,
            payload: Payload::Machine(MachinePayload {
                exec_times: vec![1.0],
                predecessors: preds,
            }),
        };
        let env = Environment::Machines(MachinesEnvironment {
            machines: 1,
            preemptive: false,
        });
        assert!(Instance::new(vec![job(vec![1]), job(vec![0])], env.clone(), 0.0).is_err());
        assert!(Instance::new(vec![job(vec![]), job(vec![0])], env, 0.0).is_ok());
    }
}
