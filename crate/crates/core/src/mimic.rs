//! The online algorithms MIMIC and DISC, the randomized variant with a
//! uniform phase offset, and the fresh/stale bookkeeping used by the audit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Action, ActionSchedule, CostBreakdown, Instance, JobId, JobSet, TimePoint};
use crate::oracle::Oracle;
use crate::problems::min_completion;
use crate::tol::{audit_tolerance, kahan_sum};

/// Safety bound on the number of phases of a single run.
pub const MAX_PHASES: usize = 200;

/// Sub-phase grid `eta_q = min(I) * alpha^(beta - 1) * delta^q` with
/// `alpha = 2 + gamma` and `delta = alpha^(1/M)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    gamma: f64,
    alpha: f64,
    delta: f64,
    beta: f64,
    m_count: usize,
    min_i: f64,
}

impl PhaseGrid {
    /// Grid of DISC(gamma, M, beta). Requires `M >= 1` and `0 < beta <= 1/M`.
    pub fn new(gamma: f64, m_count: usize, beta: f64, min_i: f64) -> Result<Self> {
        if m_count == 0 {
            return Err(Error::InvalidParameter("M must be >= 1".into()));
        }
        if !(beta > 0.0 && beta <= 1.0 / m_count as f64 + 1e-15) {
            return Err(Error::InvalidParameter(format!(
                "beta must lie in (0, 1/M], got {beta}"
            )));
        }
        Self::unchecked(gamma, m_count, beta, min_i)
    }

    /// Grid of MIMIC(gamma, omega): one offset, `beta = 1 + omega`, `omega` in `(-1, 0]`.
    pub fn for_omega(gamma: f64, omega: f64, min_i: f64) -> Result<Self> {
        if !(omega > -1.0 && omega <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega must lie in (-1, 0], got {omega}"
            )));
        }
        Self::unchecked(gamma, 1, 1.0 + omega, min_i)
    }

    fn unchecked(gamma: f64, m_count: usize, beta: f64, min_i: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!("gamma must be >= 0, got {gamma}")));
        }
        if !(min_i.is_finite() && min_i > 0.0) {
            return Err(Error::InvalidParameter(format!("min(I) must be positive, got {min_i}")));
        }
        let alpha = 2.0 + gamma;
        Ok(PhaseGrid {
            gamma,
            alpha,
            delta: alpha.powf(1.0 / m_count as f64),
            beta,
            m_count,
            min_i,
        })
    }

    /// DISC grid for `instance`, using its reset factor and `min(I)`.
    pub fn for_instance(instance: &Instance, m_count: usize, beta: f64) -> Result<Self> {
        Self::new(instance.gamma(), m_count, beta, min_completion(instance)?)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `M`.
    pub fn m_count(&self) -> usize {
        self.m_count
    }

    pub fn min_i(&self) -> f64 {
        self.min_i
    }

    /// `eta_q`, defined for negative `q` by the same formula.
    pub fn eta(&self, q: i64) -> f64 {
        self.min_i * self.alpha.powf(self.beta - 1.0 + q as f64 / self.m_count as f64)
    }

    /// `eta_{-1}, ..., eta_{last}`.
    pub fn etas(&self, last: usize) -> Vec<f64> {
        (-1..=last as i64).map(|q| self.eta(q)).collect()
    }

    /// Phase end `tau_k = eta_{m + k M}` for offset `m`.
    pub fn tau(&self, k: usize, m: usize) -> TimePoint {
        TimePoint::new(self.eta((m + k * self.m_count) as i64)).expect("eta is positive")
    }

    /// `omega = -1 + m/M + beta`.
    pub fn omega(&self, m: usize) -> f64 {
        -1.0 + m as f64 / self.m_count as f64 + self.beta
    }
}

/// One executed phase: `A_q = S_{tau_k}` replayed over `[tau_k, 2 tau_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRecord {
    pub k: usize,
    /// Grid index `q = m + k M`.
    pub q: usize,
    pub tau: f64,
    pub arrived: JobSet,
    /// `R(A_q)`.
    pub completed: JobSet,
    /// Jobs of `R(A_q)` not served by earlier phases.
    pub fresh: JobSet,
    pub value: f64,
    pub schedule: ActionSchedule,
}

impl PhaseRecord {
    /// The part of `A_q` the online algorithm actually performs: actions of
    /// already served jobs are skipped, timing is unchanged.
    pub fn executed(&self) -> ActionSchedule {
        restrict(&self.schedule, self.fresh)
    }
}

/// `schedule` with every action and completion of jobs outside `keep` removed.
pub fn restrict(schedule: &ActionSchedule, keep: JobSet) -> ActionSchedule {
    let job_of = |a: &Action| match a {
        Action::Route(s) => s.kind.job(),
        Action::Run(r) => r.job,
    };
    ActionSchedule {
        duration: schedule.duration,
        completions: schedule
            .completions
            .iter()
            .filter(|(j, _)| keep.contains(**j))
            .map(|(&j, &c)| (j, c))
            .collect(),
        actions: schedule
            .actions
            .iter()
            .copied()
            .filter(|a| keep.contains(job_of(a)))
            .collect(),
    }
}

/// A full online run for one phase offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub omega: f64,
    pub m: usize,
    pub grid: PhaseGrid,
    /// Phases `k = 1, 2, ...`; phase `k` executes `S_{tau_k}` (the idle
    /// first phase `[0, tau_1)` holds the dummy schedule and is not listed).
    pub phases: Vec<PhaseRecord>,
    /// Online completion time per job.
    pub completions: BTreeMap<JobId, f64>,
    pub cost: CostBreakdown,
}

/// MIMIC on `grid` with offset `m`. Runs until every job is served, and for
/// at least `min_phases` phases (extra phases serve nothing new).
pub fn run_on_grid(oracle: &Oracle<'_>, grid: &PhaseGrid, m: usize, min_phases: usize) -> Result<RunTrace> {
    let instance = oracle.instance();
    let all = instance.all_jobs();
    let mut served = JobSet::EMPTY;
    let mut completions = BTreeMap::new();
    let mut phases = Vec::new();
    let mut k = 1;
    while served != all || k <= min_phases {
        if k > MAX_PHASES {
            return Err(Error::Inconsistent(format!(
                "run did not finish within {MAX_PHASES} phases"
            )));
        }
        let tau = grid.tau(k, m);
        let s = oracle.best_tau_schedule(tau)?;
        let fresh = s.completed.difference(served);
        for r in fresh.iter() {
            let c = s.schedule.completion(r).expect("completed job has a completion time");
            completions.insert(r, tau.value() + c);
        }
        served = served.union(fresh);
        phases.push(PhaseRecord {
            k,
            q: m + k * grid.m_count(),
            tau: tau.value(),
            arrived: instance.arrived_by(tau.value()),
            completed: s.completed,
            fresh,
            value: s.value,
            schedule: s.schedule.clone(),
        });
        k += 1;
    }
    let cost = CostBreakdown::from_completions(instance, &completions)?;
    Ok(RunTrace {
        omega: grid.omega(m),
        m,
        grid: *grid,
        phases,
        completions,
        cost,
    })
}

/// MIMIC(gamma, omega) with the instance's reset factor.
pub fn run_mimic(oracle: &Oracle<'_>, omega: f64) -> Result<RunTrace> {
    let instance = oracle.instance();
    let grid = PhaseGrid::for_omega(instance.gamma(), omega, min_completion(instance)?)?;
    run_on_grid(oracle, &grid, 0, 0)
}

/// DISC: MIMIC for every offset `m`, each with probability `1/M`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscRun {
    pub grid: PhaseGrid,
    pub traces: Vec<RunTrace>,
    /// Exact expectation over `m`.
    pub expected: CostBreakdown,
}

fn disc_from_traces(grid: PhaseGrid, traces: Vec<RunTrace>) -> DiscRun {
    let m = traces.len() as f64;
    let mut per_job: BTreeMap<JobId, f64> = BTreeMap::new();
    for t in &traces {
        for (&j, &c) in &t.cost.per_job {
            *per_job.entry(j).or_default() += c / m;
        }
    }
    let total = kahan_sum(traces.iter().map(|t| t.cost.total)) / m;
    DiscRun {
        grid,
        traces,
        expected: CostBreakdown { total, per_job },
    }
}

pub fn run_disc(oracle: &Oracle<'_>, m_count: usize, beta: f64) -> Result<DiscRun> {
    let grid = PhaseGrid::for_instance(oracle.instance(), m_count, beta)?;
    let traces = (0..m_count)
        .map(|m| run_on_grid(oracle, &grid, m, 0))
        .collect::<Result<Vec<_>>>()?;
    Ok(disc_from_traces(grid, traces))
}

/// DISC with every trace extended to the completion phase `K`, as needed by
/// [`extract_partition`]. Returns the run and `K`.
pub fn run_disc_to_completion(oracle: &Oracle<'_>, grid: &PhaseGrid, max_k: usize) -> Result<(DiscRun, usize)> {
    let k = oracle.detect_completion_phase(grid, max_k)?;
    let traces = (0..grid.m_count())
        .map(|m| run_on_grid(oracle, grid, m, k))
        .collect::<Result<Vec<_>>>()?;
    Ok((disc_from_traces(*grid, traces), k))
}

/// Upper bound `1 + (1/M) sum_{j=1..M} alpha^(j/M)` on DISC's ratio.
pub fn disc_bound(gamma: f64, m_count: usize) -> f64 {
    let alpha = 2.0 + gamma;
    1.0 + kahan_sum((1..=m_count).map(|j| alpha.powf(j as f64 / m_count as f64))) / m_count as f64
}

/// Deterministic bound `3 + gamma`.
pub fn deterministic_bound(gamma: f64) -> f64 {
    3.0 + gamma
}

/// Randomized bound `1 + (alpha - 1) / ln(alpha)`.
pub fn randomized_bound(gamma: f64) -> f64 {
    let alpha = 2.0 + gamma;
    1.0 + (alpha - 1.0) / alpha.ln()
}

/// Result of integrating MIMIC's cost over a uniform offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomizedCost {
    pub expected_cost: f64,
    /// Maximal intervals of `omega` on which the run's trace is constant.
    pub pieces: Vec<(f64, f64)>,
    /// `|8-point - 4-point|` Gauss-Legendre discrepancy, summed over pieces.
    pub rule_gap: f64,
    pub evaluations: usize,
}

const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];

const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_3),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_3),
];

/// Breakpoints are located to this width in `omega`.
const BREAK_WIDTH: f64 = 1e-12;

/// Piece identity: per phase, the completed set and its completion offsets.
type Signature = Vec<(u64, Vec<u64>)>;

struct OmegaScan<'o, 'a> {
    oracle: &'o Oracle<'a>,
    gamma: f64,
    min_i: f64,
    evaluations: usize,
}

impl OmegaScan<'_, '_> {
    fn eval(&mut self, omega: f64) -> Result<(f64, Signature)> {
        self.evaluations += 1;
        let grid = PhaseGrid::unchecked(self.gamma, 1, 1.0 + omega, self.min_i)?;
        let trace = run_on_grid(self.oracle, &grid, 0, 0)?;
        let sig = trace
            .phases
            .iter()
            .map(|p| {
                (
                    p.fresh.bits(),
                    p.fresh.iter().map(|r| p.schedule.completions[&r].to_bits()).collect(),
                )
            })
            .collect();
        Ok((trace.cost.total, sig))
    }

    fn locate(&mut self, a: f64, sa: &Signature, b: f64, sb: &Signature, out: &mut Vec<f64>) -> Result<()> {
        if b - a <= BREAK_WIDTH {
            out.push(b);
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        let (_, sm) = self.eval(mid)?;
        if &sm != sa {
            self.locate(a, sa, mid, &sm, out)?;
        }
        if &sm != sb {
            self.locate(mid, &sm, b, sb, out)?;
        }
        Ok(())
    }

    /// Gauss-Legendre over `[a, b]`, with the trace signature at every node.
    fn rule(&mut self, nodes: &[(f64, f64)], a: f64, b: f64) -> Result<(f64, Vec<(f64, Signature)>)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut sum = 0.0;
        let mut sigs = Vec::with_capacity(nodes.len());
        for &(x, w) in nodes {
            let omega = mid + half * x;
            let (c, s) = self.eval(omega)?;
            sum += w * c;
            sigs.push((omega, s));
        }
        Ok((half * sum, sigs))
    }
}

/// `E[cost]` of MIMIC with `omega` uniform on `(-1, 0]`.
///
/// The offset range is scanned at `quadrature_points` equal steps. Wherever
/// the run's trace changes, the change is located by bisection; on each
/// piece of constant trace the cost is smooth and is integrated with 8-point
/// Gauss-Legendre, cross-checked against 4 points.
pub fn randomized_expected_cost(oracle: &Oracle<'_>, quadrature_points: usize) -> Result<RandomizedCost> {
    if quadrature_points < 16 {
        return Err(Error::InvalidParameter(format!(
            "quadrature_points must be >= 16, got {quadrature_points}"
        )));
    }
    let instance = oracle.instance();
    let mut scan = OmegaScan {
        oracle,
        gamma: instance.gamma(),
        min_i: min_completion(instance)?,
        evaluations: 0,
    };
    let n = quadrature_points;
    let grid: Vec<f64> = (0..=n).map(|i| -1.0 + i as f64 / n as f64).collect();
    let mut sigs = Vec::with_capacity(grid.len());
    for &w in &grid {
        // the domain is open at -1
        sigs.push(scan.eval(w.max(-1.0 + BREAK_WIDTH))?.1);
    }
    let mut cuts: Vec<f64> = grid.clone();
    for i in 0..n {
        if sigs[i] != sigs[i + 1] {
            scan.locate(grid[i], &sigs[i], grid[i + 1], &sigs[i + 1], &mut cuts)?;
        }
    }
    let tol = audit_tolerance();
    let mut total = 0.0;
    let mut rule_gap = 0.0;
    let mut pieces: Vec<(f64, f64, Signature)> = Vec::new();
    let mut pending: Vec<f64> = Vec::new();
    for round in 0.. {
        cuts.append(&mut pending);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        total = 0.0;
        rule_gap = 0.0;
        pieces.clear();
        let mut split = false;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a <= 0.0 {
                continue;
            }
            let (i8, s8) = scan.rule(&GL8, a, b)?;
            let first = &s8[0].1;
            if let Some(pos) = s8.iter().position(|(_, s)| s != first) {
                if round > 8 {
                    return Err(Error::Quadrature(format!("trace keeps changing inside [{a}, {b}]")));
                }
                let (lo, slo) = s8[pos - 1].clone();
                let (hi, shi) = s8[pos].clone();
                scan.locate(lo, &slo, hi, &shi, &mut pending)?;
                split = true;
                continue;
            }
            let (i4, _) = scan.rule(&GL4, a, b)?;
            total += i8;
            rule_gap += (i8 - i4).abs();
            match pieces.last_mut() {
                Some(last) if &last.2 == first => last.1 = b,
                _ => pieces.push((a, b, first.clone())),
            }
        }
        if !split {
            break;
        }
    }
    if rule_gap > tol * total.abs().max(1.0) {
        return Err(Error::Quadrature(format!(
            "Gauss-Legendre 8/4 discrepancy {rule_gap:e} exceeds tolerance"
        )));
    }
    let pieces = pieces.into_iter().map(|(a, b, _)| (a, b)).collect();
    Ok(RandomizedCost {
        expected_cost: total,
        pieces,
        rule_gap,
        evaluations: scan.evaluations,
    })
}

/// Fresh/stale weights and costs per schedule `A_q` and sub-phase `j`.
///
/// Entry `[q][j]` (for `0 <= j <= q <= Q`) collects the jobs of `A_q` whose
/// completion offset lies in `[eta_{j-1}, eta_j)`. Values are raw (not
/// divided by `OPT`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreshStalePartition {
    pub q_max: usize,
    pub m_count: usize,
    pub k: usize,
    pub w_fresh: Vec<Vec<f64>>,
    pub w_stale: Vec<Vec<f64>>,
    pub g_fresh: Vec<Vec<f64>>,
    pub g_stale: Vec<Vec<f64>>,
}

impl FreshStalePartition {
    pub fn w(&self, q: usize, j: usize) -> f64 {
        self.w_fresh[q][j] + self.w_stale[q][j]
    }

    pub fn g(&self, q: usize, j: usize) -> f64 {
        self.g_fresh[q][j] + self.g_stale[q][j]
    }

    pub fn w_fresh_total(&self, q: usize) -> f64 {
        kahan_sum(self.w_fresh[q].iter().copied())
    }

    pub fn w_stale_total(&self, q: usize) -> f64 {
        kahan_sum(self.w_stale[q].iter().copied())
    }

    /// `P(q) = {q mod M, q mod M + M, ..., q - M}`.
    pub fn predecessors(&self, q: usize) -> impl Iterator<Item = usize> {
        let m = self.m_count;
        (q % m..q).step_by(m)
    }

    /// Every value divided by `scale` (`OPT` for the normalized point).
    pub fn scaled(&self, scale: f64) -> Self {
        let f = |v: &Vec<Vec<f64>>| v.iter().map(|row| row.iter().map(|x| x / scale).collect()).collect();
        FreshStalePartition {
            w_fresh: f(&self.w_fresh),
            w_stale: f(&self.w_stale),
            g_fresh: f(&self.g_fresh),
            g_stale: f(&self.g_stale),
            ..self.clone()
        }
    }

    /// `(1/M) sum_q sum_j eta_q w^F_qj + g^F_qj`, the expected online cost.
    pub fn disc_cost(&self, grid: &PhaseGrid) -> f64 {
        let terms = (0..=self.q_max).flat_map(|q| {
            let eta = grid.eta(q as i64);
            (0..=q).map(move |j| (q, j, eta))
        });
        kahan_sum(terms.map(|(q, j, eta)| eta * self.w_fresh[q][j] + self.g_fresh[q][j])) / self.m_count as f64
    }
}

/// Builds the partition from DISC traces that all reach phase `k`.
pub fn extract_partition(run: &DiscRun, k: usize, instance: &Instance) -> Result<FreshStalePartition> {
    let grid = &run.grid;
    let m_count = grid.m_count();
    if k == 0 {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    if run.traces.len() != m_count {
        return Err(Error::Inconsistent(format!(
            "{} traces for M = {m_count}",
            run.traces.len()
        )));
    }
    let q_max = k * m_count + m_count - 1;
    let zeros = || (0..=q_max).map(|q| vec![0.0; q + 1]).collect::<Vec<_>>();
    let mut part = FreshStalePartition {
        q_max,
        m_count,
        k,
        w_fresh: zeros(),
        w_stale: zeros(),
        g_fresh: zeros(),
        g_stale: zeros(),
    };
    let etas = grid.etas(q_max);
    let eta = |i: i64| etas[(i + 1) as usize];
    for trace in &run.traces {
        for phase in trace.phases.iter().filter(|p| p.k <= k) {
            let q = phase.q;
            for r in phase.completed.iter() {
                let c = phase.schedule.completions[&r];
                let j = (0..=q as i64)
                    .find(|&j| c < eta(j))
                    .ok_or_else(|| Error::Inconsistent(format!("offset {c} of job {r} not below eta_{q}")))?;
                if c < eta(j - 1) {
                    return Err(Error::Inconsistent(format!("offset {c} of job {r} below eta_-1")));
                }
                let w = instance.job(r)?.weight;
                let j = j as usize;
                if phase.fresh.contains(r) {
                    part.w_fresh[q][j] += w;
                    part.g_fresh[q][j] += w * c;
                } else {
                    part.w_stale[q][j] += w;
                    part.g_stale[q][j] += w * c;
                }
            }
        }
        if trace.phases.iter().filter(|p| p.k <= k).count() != k {
            return Err(Error::Inconsistent(format!(
                "trace for m = {} stops before phase {k}",
                trace.m
            )));
        }
    }
    Ok(part)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Environment, Job, Payload, TrpEnvironment, TrpPayload};
    use crate::problems::metric::MetricSpace;
    use crate::problems::OracleCaps;

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
    fn grid_identities() {
        let g = PhaseGrid::new(1.0, 3, 0.2, 1.5).unwrap();
        assert!((g.delta().powi(3) - 3.0).abs() < 1e-12);
        for i in -4..6i64 {
            for j in 0..5i64 {
                let lhs = g.eta(i) * g.delta().powi(j as i32);
                assert!((lhs - g.eta(i + j)).abs() <= 1e-12 * lhs);
            }
        }
        assert!(g.eta(-1) <= g.min_i());
        for k in 1..6 {
            let r = g.tau(k + 1, 1).value() / g.tau(k, 1).value();
            assert!((r - 3.0).abs() < 1e-12);
        }
        assert!(PhaseGrid::new(1.0, 2, 0.6, 1.0).is_err());
        assert!(PhaseGrid::for_omega(1.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn mimic_single_job() {
        let inst = single_trp();
        let oracle = Oracle::new(&inst, OracleCaps::default());
        let t = run_mimic(&oracle, 0.0).unwrap();
        assert_eq!(t.cost.total, 4.0);
        assert_eq!(t.phases.len(), 1);
        assert_eq!(t.completions[&0], 4.0);
    }

    #[test]
    fn disc_single_job_closed_form() {
        let inst = single_trp();
        let oracle = Oracle::new(&inst, OracleCaps::default());
        for m_count in 1..=4 {
            let beta = 1.0 / m_count as f64;
            let run = run_disc(&oracle, m_count, beta).unwrap();
            let expected = (0..m_count)
                .map(|m| 3f64.powf(m as f64 / m_count as f64 + beta) + 1.0)
                .sum::<f64>()
                / m_count as f64;
            assert!((run.expected.total - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn randomized_single_job() {
        let inst = single_trp();
        let oracle = Oracle::new(&inst, OracleCaps::default());
        let r = randomized_expected_cost(&oracle, 16).unwrap();
        assert!((r.expected_cost - randomized_bound(1.0)).abs() < 1e-9);
        assert_eq!(r.pieces.len(), 1);
    }

    #[test]
    fn bounds() {
        assert_eq!(disc_bound(1.0, 1), 4.0);
        assert!((disc_bound(1.0, 2) - (1.0 + (3f64.sqrt() + 3.0) / 2.0)).abs() < 1e-12);
        assert!((randomized_bound(1.0) - 2.820_478_45).abs() < 1e-8);
        assert!((randomized_bound(0.0) - 2.442_695_04).abs() < 1e-8);
    }
}
