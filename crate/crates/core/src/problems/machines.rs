//! Exact schedule search for unrelated machines with precedences.
//!
//! Non-preemptive: every semi-active schedule is a global sequence of
//! `(job, machine)` placements, each job starting as early as its machine,
//! its arrival and its predecessors allow. The search keeps, per set of
//! finished jobs, the Pareto front of (machine free times, completion times
//! still needed by unfinished successors, accumulated cost).
//!
//! Preemptive: decisions are taken at arrival and completion events, where
//! every machine picks a distinct available job (or idles) until the next
//! event. Jobs may migrate between machines.

use std::collections::HashMap;

use crate::model::MachineRun;

#[derive(Clone, Debug)]
pub(crate) struct MachineJob {
    pub id: usize,
    pub arrival: f64,
    pub weight: f64,
    pub exec: Vec<f64>,
    /// Local indices of predecessors.
    pub preds: Vec<usize>,
    /// A predecessor lies outside the considered job set.
    pub blocked: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct MachineOptimum {
    pub set: u64,
    pub cost: f64,
    pub runs: Vec<MachineRun>,
}

/// Remaining fractions below this count as finished.
const DONE_EPS: f64 = 1e-12;

type Best = Vec<Option<(f64, Vec<MachineRun>)>>;

fn offer(best: &mut Best, done: u64, g: f64, runs: &[MachineRun], keep: impl Fn(usize) -> bool) {
    let slot = &mut best[done as usize];
    if slot.as_ref().is_none_or(|(c, _)| g < *c) {
        *slot = Some((g, runs.iter().copied().filter(|r| keep(r.job)).collect()));
    }
}

struct Sequencer<'a> {
    jobs: &'a [MachineJob],
    deadline: f64,
    /// Time at which each machine becomes free.
    free: Vec<f64>,
    comp: Vec<f64>,
    done: u64,
    runs: Vec<MachineRun>,
    labels: HashMap<u64, Vec<Vec<f64>>>,
    best: Best,
}

impl Sequencer<'_> {
    fn label(&self, g: f64) -> Vec<f64> {
        let mut l = self.free.clone();
        for i in 0..self.jobs.len() {
            if self.done & (1 << i) == 0 {
                continue;
            }
            let needed = self
                .jobs
                .iter()
                .enumerate()
                .any(|(k, other)| self.done & (1 << k) == 0 && other.preds.contains(&i));
            if needed {
                l.push(self.comp[i]);
            }
        }
        l.push(g);
        l
    }

    fn admit(&mut self, g: f64) -> bool {
        let label = self.label(g);
        let front = self.labels.entry(self.done).or_default();
        let dominates = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| x <= y);
        if front.iter().any(|l| dominates(l, &label)) {
            return false;
        }
        front.retain(|l| !dominates(&label, l));
        front.push(label);
        true
    }

    fn dfs(&mut self, g: f64) {
        if !self.admit(g) {
            return;
        }
        let jobs = self.jobs;
        offer(&mut self.best, self.done, g, &self.runs, |_| true);
        for (i, job) in jobs.iter().enumerate() {
            if self.done & (1 << i) != 0 || job.blocked || job.preds.iter().any(|&p| self.done & (1 << p) == 0) {
                continue;
            }
            let ready = job.preds.iter().map(|&p| self.comp[p]).fold(job.arrival, f64::max);
            for k in 0..self.free.len() {
                let p = job.exec[k];
                if !p.is_finite() {
                    continue;
                }
                let start = self.free[k].max(ready);
                let end = start + p;
                if end >= self.deadline {
                    continue;
                }
                let old_free = self.free[k];
                self.free[k] = end;
                self.comp[i] = end;
                self.done |= 1 << i;
                self.runs.push(MachineRun {
                    machine: k,
                    job: job.id,
                    start,
                    end,
                });
                self.dfs(g + job.weight * end);
                self.runs.pop();
                self.done &= !(1 << i);
                self.free[k] = old_free;
            }
        }
    }
}

/// Done set and quantized remaining work.
type LabelKey = (u64, Vec<i64>);

struct Preemptive<'a> {
    jobs: &'a [MachineJob],
    machines: usize,
    deadline: f64,
    rem: Vec<f64>,
    done: u64,
    runs: Vec<MachineRun>,
    labels: HashMap<LabelKey, Vec<(f64, f64)>>,
    best: Best,
}

impl Preemptive<'_> {
    fn admit(&mut self, t: f64, g: f64) -> bool {
        let key = (self.done, self.rem.iter().map(|r| (r * 1e9).round() as i64).collect());
        let front = self.labels.entry(key).or_default();
        if front.iter().any(|&(t0, g0)| t0 <= t && g0 <= g) {
            return false;
        }
        front.retain(|&(t0, g0)| !(t <= t0 && g <= g0));
        front.push((t, g));
        true
    }

    fn available(&self, t: f64) -> Vec<usize> {
        (0..self.jobs.len())
            .filter(|&i| {
                let job = &self.jobs[i];
                self.done & (1 << i) == 0
                    && !job.blocked
                    && job.arrival <= t
                    && job.preds.iter().all(|&p| self.done & (1 << p) != 0)
            })
            .collect()
    }

    fn next_arrival(&self, t: f64) -> f64 {
        self.jobs
            .iter()
            .enumerate()
            .filter(|(i, j)| self.done & (1 << i) == 0 && !j.blocked && j.arrival > t)
            .map(|(_, j)| j.arrival)
            .fold(f64::INFINITY, f64::min)
    }

    fn dfs(&mut self, t: f64, g: f64) {
        if !self.admit(t, g) {
            return;
        }
        let done = self.done;
        offer(&mut self.best, done, g, &self.runs, |id| {
            self.jobs
                .iter()
                .position(|j| j.id == id)
                .is_some_and(|i| done & (1 << i) != 0)
        });
        let avail = self.available(t);
        let arrival = self.next_arrival(t);
        let mut choice = vec![None; self.machines];
        self.assign(0, &avail, &mut choice, t, arrival, g);
    }

    fn assign(&mut self, k: usize, avail: &[usize], choice: &mut Vec<Option<usize>>, t: f64, arrival: f64, g: f64) {
        if k == self.machines {
            self.advance(choice, t, arrival, g);
            return;
        }
        choice[k] = None;
        self.assign(k + 1, avail, choice, t, arrival, g);
        for &i in avail {
            if choice[..k].contains(&Some(i)) || !self.jobs[i].exec[k].is_finite() {
                continue;
            }
            choice[k] = Some(i);
            self.assign(k + 1, avail, choice, t, arrival, g);
        }
        choice[k] = None;
    }

    fn advance(&mut self, choice: &[Option<usize>], t: f64, arrival: f64, g: f64) {
        let finish = choice
            .iter()
            .enumerate()
            .filter_map(|(k, c)| c.map(|i| t + self.rem[i] * self.jobs[i].exec[k]))
            .fold(f64::INFINITY, f64::min);
        let next = finish.min(arrival);
        if !next.is_finite() || next >= self.deadline {
            return;
        }
        let saved_rem = self.rem.clone();
        let saved_done = self.done;
        let saved_runs = self.runs.len();
        let mut gain = 0.0;
        for (k, c) in choice.iter().enumerate() {
            let Some(i) = *c else { continue };
            let job = &self.jobs[i];
            self.rem[i] -= (next - t) / job.exec[k];
            self.runs.push(MachineRun {
                machine: k,
                job: job.id,
                start: t,
                end: next,
            });
            if self.rem[i] <= DONE_EPS {
                self.rem[i] = 0.0;
                self.done |= 1 << i;
                gain += job.weight * next;
            }
        }
        self.dfs(next, g + gain);
        self.runs.truncate(saved_runs);
        self.done = saved_done;
        self.rem = saved_rem;
    }
}

/// Merges back-to-back pieces of the same job on the same machine.
fn merge_runs(runs: Vec<MachineRun>) -> Vec<MachineRun> {
    let mut sorted = runs;
    sorted.sort_by(|a, b| {
        (a.machine, a.job)
            .cmp(&(b.machine, b.job))
            .then(a.start.total_cmp(&b.start))
    });
    let mut out: Vec<MachineRun> = Vec::with_capacity(sorted.len());
    for r in sorted {
        match out.last_mut() {
            Some(last) if last.machine == r.machine && last.job == r.job && last.end == r.start => last.end = r.end,
            _ => out.push(r),
        }
    }
    out.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.machine.cmp(&b.machine)));
    out
}

/// Cheapest schedule completing exactly `set` strictly before `deadline`, for
/// every feasible subset of `jobs`, in ascending mask order.
pub(crate) fn subset_optima(
    machines: usize,
    preemptive: bool,
    jobs: &[MachineJob],
    deadline: f64,
) -> Vec<MachineOptimum> {
    let n = jobs.len();
    let best = if preemptive {
        let mut search = Preemptive {
            jobs,
            machines,
            deadline,
            rem: vec![1.0; n],
            done: 0,
            runs: Vec::new(),
            labels: HashMap::new(),
            best: vec![None; 1 << n],
        };
        search.dfs(0.0, 0.0);
        search.best
    } else {
        let mut search = Sequencer {
            jobs,
            deadline,
            free: vec![0.0; machines],
            comp: vec![0.0; n],
            done: 0,
            runs: Vec::new(),
            labels: HashMap::new(),
            best: vec![None; 1 << n],
        };
        search.dfs(0.0);
        search.best
    };
    best.into_iter()
        .enumerate()
        .filter_map(|(set, e)| {
            e.map(|(cost, runs)| MachineOptimum {
                set: set as u64,
                cost,
                runs: merge_runs(runs),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(id: usize, arrival: f64, weight: f64, exec: &[f64], preds: &[usize]) -> MachineJob {
        MachineJob {
            id,
            arrival,
            weight,
            exec: exec.to_vec(),
            preds: preds.to_vec(),
            blocked: false,
        }
    }

    fn full(opt: &[MachineOptimum], n: usize) -> &MachineOptimum {
        opt.iter().find(|o| o.set == (1 << n) - 1).unwrap()
    }

    #[test]
    fn single_machine_wspt() {
        // WSPT order: job 1 (ratio 2) before job 0 (ratio 1/3)
        let jobs = [job(0, 0.0, 1.0, &[3.0], &[]), job(1, 0.0, 2.0, &[1.0], &[])];
        let opt = subset_optima(1, false, &jobs, f64::INFINITY);
        assert_eq!(full(&opt, 2).cost, 2.0 * 1.0 + 1.0 * 4.0);
    }

    #[test]
    fn unrelated_machines_pick_fast_machine() {
        let jobs = [job(0, 0.0, 1.0, &[1.0, 5.0], &[]), job(1, 0.0, 1.0, &[5.0, 1.0], &[])];
        let opt = subset_optima(2, false, &jobs, f64::INFINITY);
        assert_eq!(full(&opt, 2).cost, 2.0);
    }

    #[test]
    fn precedence_delays_successor() {
        let jobs = [job(0, 0.0, 1.0, &[2.0, 2.0], &[]), job(1, 0.0, 1.0, &[1.0, 1.0], &[0])];
        let opt = subset_optima(2, false, &jobs, f64::INFINITY);
        assert_eq!(full(&opt, 2).cost, 2.0 + 3.0);
        // job 1 cannot be completed alone
        assert!(opt.iter().all(|o| o.set != 0b10));
    }

    #[test]
    fn preemption_helps_with_late_short_job() {
        // long job at 0, short heavy job at 1: preempt
        let jobs = [job(0, 0.0, 1.0, &[4.0], &[]), job(1, 1.0, 10.0, &[1.0], &[])];
        let np = subset_optima(1, false, &jobs, f64::INFINITY);
        let p = subset_optima(1, true, &jobs, f64::INFINITY);
        // non-preemptive best: wait for job 1 (10*2 + 1*6 = 26) or run 0 first (4 + 50)
        assert_eq!(full(&np, 2).cost, 26.0);
        // preemptive: 10*2 + 1*5 = 25
        assert!((full(&p, 2).cost - 25.0).abs() < 1e-12);
    }

    #[test]
    fn deadline_is_strict() {
        let jobs = [job(0, 0.0, 1.0, &[2.0], &[])];
        assert_eq!(subset_optima(1, false, &jobs, 2.0).len(), 1);
        assert_eq!(subset_optima(1, true, &jobs, 2.0).len(), 1);
        assert_eq!(subset_optima(1, false, &jobs, 2.5).len(), 2);
    }
}
