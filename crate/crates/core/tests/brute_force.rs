//! The exact oracle against plain permutation search. The references below
//! only read the instance: distances, arrivals, weights, execution times.

use resched::generator::{generate, GeneratorConfig};
use resched::model::{Environment, Instance, JobSet, Payload, ProblemKind, TimePoint};
use resched::oracle::Oracle;
use resched::problems::{min_completion, OracleCaps};

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn subsets(items: &[usize]) -> Vec<Vec<usize>> {
    (0..1u32 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &x)| x)
                .collect()
        })
        .collect()
}

/// Completion times of `order` on one TRP server, or `None` past `deadline`.
fn trp_route(inst: &Instance, order: &[usize], deadline: f64) -> Option<Vec<(usize, f64)>> {
    let Environment::Trp(env) = inst.environment() else {
        unreachable!()
    };
    let (mut pos, mut t) = (env.metric.origin(), 0.0f64);
    let mut out = Vec::new();
    for &r in order {
        let job = &inst.jobs()[r];
        let Payload::Trp(p) = &job.payload else { unreachable!() };
        t = (t + env.metric.d(pos, p.location)).max(job.arrival);
        pos = p.location;
        if t >= deadline {
            return None;
        }
        out.push((r, t));
    }
    Some(out)
}

/// Event sequences (pickup `2r`, drop `2r + 1`) on one DARP server.
fn darp_route(inst: &Instance, events: &[usize], deadline: f64) -> Option<Vec<(usize, f64)>> {
    let Environment::Darp(env) = inst.environment() else {
        unreachable!()
    };
    let cap = env.capacity.unwrap_or(usize::MAX);
    let (mut pos, mut t, mut load) = (env.metric.origin(), 0.0f64, 0usize);
    let mut picked = vec![false; inst.len()];
    let mut out = Vec::new();
    for &e in events {
        let (r, drop) = (e / 2, e % 2 == 1);
        let job = &inst.jobs()[r];
        let Payload::Darp(p) = &job.payload else { unreachable!() };
        if drop {
            if !picked[r] {
                return None;
            }
            t += env.metric.d(pos, p.destination);
            pos = p.destination;
            load -= 1;
            if t >= deadline {
                return None;
            }
            out.push((r, t));
        } else {
            if load == cap {
                return None;
            }
            t = (t + env.metric.d(pos, p.source)).max(job.arrival);
            pos = p.source;
            picked[r] = true;
            load += 1;
        }
    }
    Some(out)
}

/// List schedule of `order` with machine `assign[r]`; `None` if a
/// predecessor is missing or comes later, or a job ends past `deadline`.
fn machine_schedule(inst: &Instance, order: &[usize], assign: &[usize], deadline: f64) -> Option<Vec<(usize, f64)>> {
    let Environment::Machines(env) = inst.environment() else {
        unreachable!()
    };
    let mut free = vec![0.0f64; env.machines];
    let mut done: Vec<Option<f64>> = vec![None; inst.len()];
    let mut out = Vec::new();
    for &r in order {
        let job = &inst.jobs()[r];
        let Payload::Machine(p) = &job.payload else {
            unreachable!()
        };
        let mut start = job.arrival.max(free[assign[r]]);
        for &pr in &p.predecessors {
            start = start.max(done[pr]?);
        }
        let end = start + p.exec_times[assign[r]];
        if !end.is_finite() || end >= deadline {
            return None;
        }
        free[assign[r]] = end;
        done[r] = Some(end);
        out.push((r, end));
    }
    Some(out)
}

/// Every way of completing exactly `set` before `deadline`, as completion lists.
fn schedules(inst: &Instance, set: &[usize], deadline: f64) -> Vec<Vec<(usize, f64)>> {
    match inst.environment() {
        Environment::Trp(_) => permutations(set)
            .iter()
            .filter_map(|o| trp_route(inst, o, deadline))
            .collect(),
        Environment::Darp(_) => {
            let events: Vec<usize> = set.iter().flat_map(|&r| [2 * r, 2 * r + 1]).collect();
            permutations(&events)
                .iter()
                .filter_map(|o| darp_route(inst, o, deadline))
                .collect()
        }
        Environment::Machines(env) => {
            let mut out = Vec::new();
            let n = inst.len();
            for code in 0..env.machines.pow(set.len() as u32) {
                let mut assign = vec![0; n];
                let mut c = code;
                for &r in set {
                    assign[r] = c % env.machines;
                    c /= env.machines;
                }
                out.extend(
                    permutations(set)
                        .iter()
                        .filter_map(|o| machine_schedule(inst, o, &assign, deadline)),
                );
            }
            out
        }
    }
}

fn cost(inst: &Instance, completions: &[(usize, f64)]) -> f64 {
    completions.iter().map(|&(r, t)| inst.jobs()[r].weight * t).sum()
}

fn brute_opt(inst: &Instance) -> f64 {
    let all: Vec<usize> = (0..inst.len()).collect();
    schedules(inst, &all, f64::INFINITY)
        .iter()
        .map(|s| cost(inst, s))
        .fold(f64::INFINITY, f64::min)
}

fn brute_val(inst: &Instance, tau: f64) -> f64 {
    let arrived: Vec<usize> = (0..inst.len()).filter(|&r| inst.jobs()[r].arrival <= tau).collect();
    let mut best = f64::INFINITY;
    for set in subsets(&arrived) {
        let penalty: f64 = arrived
            .iter()
            .filter(|r| !set.contains(r))
            .map(|&r| inst.jobs()[r].weight)
            .sum();
        for s in schedules(inst, &set, tau) {
            best = best.min(cost(inst, &s) + tau * penalty);
        }
    }
    best
}

fn brute_min_completion(inst: &Instance) -> f64 {
    (0..inst.len())
        .flat_map(|r| schedules(inst, &[r], f64::INFINITY))
        .map(|s| s[0].1)
        .fold(f64::INFINITY, f64::min)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

fn check_family(cfg: GeneratorConfig, seed: u64, count: u64) {
    for id in 0..count {
        let inst = generate(&cfg, seed, id).unwrap();
        let oracle = Oracle::new(&inst, OracleCaps::default());
        let opt = oracle.optimal_offline().unwrap().cost.total;
        let reference = brute_opt(&inst);
        assert!(
            close(opt, reference),
            "{} #{id}: OPT {opt} vs brute force {reference}",
            cfg.problem
        );

        let m = min_completion(&inst).unwrap();
        let reference = brute_min_completion(&inst);
        assert!(
            close(m, reference),
            "{} #{id}: min(I) {m} vs brute force {reference}",
            cfg.problem
        );

        let horizon = inst.jobs().iter().map(|j| j.arrival).fold(0.0, f64::max) + reference * 4.0;
        for step in 1..=6 {
            let tau = horizon * step as f64 / 6.0;
            let got = oracle.best_tau_schedule(TimePoint::new(tau).unwrap()).unwrap().value;
            let reference = brute_val(&inst, tau);
            assert!(
                close(got, reference),
                "{} #{id} tau {tau}: val {got} vs brute force {reference}",
                cfg.problem
            );
        }
    }
}

#[test]
fn trp_matches_permutation_search() {
    check_family(GeneratorConfig::new(ProblemKind::Trp).with_jobs(5), 21, 25);
}

#[test]
fn darp_matches_event_search() {
    check_family(GeneratorConfig::new(ProblemKind::Darp).with_jobs(3), 22, 25);
    let mut cfg = GeneratorConfig::new(ProblemKind::Darp).with_jobs(3);
    cfg.capacity = Some(1);
    check_family(cfg, 23, 25);
}

#[test]
fn machines_match_list_schedules() {
    check_family(GeneratorConfig::new(ProblemKind::Machines).with_jobs(4), 24, 25);
    check_family(
        GeneratorConfig::new(ProblemKind::Machines)
            .with_jobs(4)
            .with_precedence(0.5),
        25,
        25,
    );
}

#[test]
fn darp_min_completion_single_job() {
    let text = r#"{"problem": "darp", "environment": {"metric": {"distances": [[0, 1, 3], [1, 0, 2], [3, 2, 0]], "origin": 0}, "servers": 1},
        "jobs": [{"arrival": 0, "weight": 1, "payload": {"source": 1, "destination": 2}}]}"#;
    let inst = resched::io::instance_from_json(text).unwrap();
    assert_eq!(min_completion(&inst).unwrap(), 3.0);
    assert_eq!(brute_min_completion(&inst), 3.0);
}

#[test]
fn two_machine_jobs_on_one_machine() {
    let text = r#"{"problem": "machines", "environment": {"machines": 1, "preemptive": false}, "jobs": [
        {"arrival": 0, "weight": 1, "payload": {"exec_times": [1], "predecessors": []}},
        {"arrival": 0, "weight": 1, "payload": {"exec_times": [1], "predecessors": []}}]}"#;
    let inst = resched::io::instance_from_json(text).unwrap();
    let oracle = Oracle::new(&inst, OracleCaps::default());
    assert_eq!(oracle.optimal_offline().unwrap().cost.total, 3.0);
    assert_eq!(brute_opt(&inst), 3.0);
}

#[test]
fn single_job_penalty_versus_service() {
    let text = r#"{"problem": "trp", "environment": {"metric": {"distances": [[0, 1], [1, 0]], "origin": 0}, "servers": 1},
        "jobs": [{"arrival": 1, "weight": 1, "payload": {"location": 1}}]}"#;
    let inst = resched::io::instance_from_json(text).unwrap();
    let oracle = Oracle::new(&inst, OracleCaps::default());
    let s = oracle.best_tau_schedule(TimePoint::new(2.0).unwrap()).unwrap();
    assert_eq!(s.value, 1.0);
    assert_eq!(s.completed, JobSet::singleton(0));
    assert_eq!(brute_val(&inst, 2.0), 1.0);
}
