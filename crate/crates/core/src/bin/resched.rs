//! Command-line front end. Every verb prints its table as CSV on stdout and,
//! with `--out DIR`, also writes `<stem>.csv`, `<stem>.json` and `<stem>.gp`.
//!
//! Exit status: 0 when every check passes, 1 when a bound or audit check
//! fails, 2 on usage, parse or runtime errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use resched::experiments::audit::audit_full;
use resched::experiments::flaw::CLAIMED_LIMIT;
use resched::experiments::output::{csv_string, ratio_plot, write_bundle, PlotSpec, Series};
use resched::experiments::{
    evaluate_with, flaw_table, fuzz, tightness_report, Algorithm, AuditOptions, ExperimentReport, FuzzConfig, BOUND_TOL,
};
use resched::generator::GeneratorConfig;
use resched::io::read_instance;
use resched::lpaudit::{build_primal, export_lp, read_lp};
use resched::mimic::{disc_bound, run_disc, PhaseGrid};
use resched::model::ProblemKind;
use resched::oracle::Oracle;
use resched::problems::OracleCaps;
use resched::tol::audit_tolerance;

#[derive(Parser)]
#[command(name = "resched", version, about = "Online algorithms for resettable scheduling")]
#[command(after_help = "RESCHED_TOL overrides the audit tolerance (default 1e-9).")]
struct Cli {
    #[command(flatten)]
    caps: CapArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CapArgs {
    /// Oracle job limit.
    #[arg(long, global = true, default_value_t = OracleCaps::default().max_jobs)]
    cap_jobs: usize,
    /// Oracle metric-size limit.
    #[arg(long, global = true, default_value_t = OracleCaps::default().max_points)]
    cap_points: usize,
    /// Oracle machine limit.
    #[arg(long, global = true, default_value_t = OracleCaps::default().max_machines)]
    cap_machines: usize,
    /// Job limit for preemptive variants.
    #[arg(long, global = true, default_value_t = OracleCaps::default().max_preemptive_jobs)]
    cap_preemptive_jobs: usize,
}

impl CapArgs {
    fn caps(&self) -> OracleCaps {
        OracleCaps {
            max_jobs: self.cap_jobs,
            max_points: self.cap_points,
            max_machines: self.cap_machines,
            max_preemptive_jobs: self.cap_preemptive_jobs,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one algorithm on an instance and compare with OPT.
    Run(RunArgs),
    /// Run DISC and list the cost of every phase offset.
    Disc(DiscArgs),
    /// Reproduce the lower-bound constructions.
    Tightness(TightnessArgs),
    /// Tabulate the printed expression L_{m,v} against its claimed limit 2.
    Flaw(FlawArgs),
    /// Full LP audit of DISC on an instance.
    Audit(AuditArgs),
    /// Audit many generated instances.
    Fuzz(FuzzArgs),
    /// Write the primal LP for a phase grid in LP format.
    ExportLp(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Mimic,
    Disc,
    Randomized,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Trp,
    Darp,
    Machines,
}

impl From<ProblemArg> for ProblemKind {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Trp => ProblemKind::Trp,
            ProblemArg::Darp => ProblemKind::Darp,
            ProblemArg::Machines => ProblemKind::Machines,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Directory for the CSV, JSON and gnuplot files.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "mimic")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega: f64,
    #[arg(long = "M", default_value_t = 1)]
    m_count: usize,
    /// Defaults to 1/M.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 16)]
    quadrature: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct DiscArgs {
    instance: PathBuf,
    #[arg(long = "M", default_value_t = 2)]
    m_count: usize,
    /// Defaults to 1/M.
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct TightnessArgs {
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// One or more values; the gap should shrink along the list.
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5])]
    epsilon: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    omega: f64,
    #[arg(long, default_value_t = 16)]
    quadrature: usize,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FlawArgs {
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [1, 2])]
    k: Vec<u32>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [3.0, 10.0, 1e2, 1e3, 1e4, 1e6])]
    m_list: Vec<f64>,
    #[arg(long, num_args = 1.., value_delimiter = ',', default_values_t = [0.3, 0.5, 0.9])]
    v: Vec<f64>,
    /// Distance from 2 tolerated at the largest m.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct AuditArgs {
    instance: PathBuf,
    #[arg(long = "M", default_value_t = 1)]
    m_count: usize,
    /// Defaults to 1/M.
    #[arg(long)]
    beta: Option<f64>,
    /// Also write the primal LP here and check that it parses back.
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Solve the primal in exact rationals.
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, value_enum, default_value = "trp")]
    problem: ProblemArg,
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    max_jobs: usize,
    #[arg(long, default_value_t = 2)]
    machines: usize,
    /// Probability of each precedence edge (machines).
    #[arg(long, default_value_t = 0.0)]
    precedence: f64,
    /// Skip the LP audit and only check ratios.
    #[arg(long)]
    no_audit: bool,
    /// Solve audited primals in exact rationals.
    #[arg(long)]
    exact: bool,
    /// Where failing instances are written.
    #[arg(long, default_value = "resched-repro")]
    repro_dir: PathBuf,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long = "M", default_value_t = 1)]
    m_count: usize,
    /// Defaults to 1/M.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "K", default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    min_i: f64,
    #[arg(long, short)]
    output: PathBuf,
}

type CliResult = Result<bool, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn beta_or_default(beta: Option<f64>, m_count: usize) -> f64 {
    beta.unwrap_or(1.0 / m_count.max(1) as f64)
}

fn emit<T: Serialize, J: Serialize>(
    out: &OutArgs,
    stem: &str,
    rows: &[T],
    sidecar: &J,
    plot: &PlotSpec,
) -> Result<(), String> {
    print!("{}", csv_string(rows).map_err(err)?);
    if let Some(dir) = &out.out {
        let w = write_bundle(dir, stem, rows, sidecar, plot).map_err(err)?;
        eprintln!(
            "wrote {}, {}, {}",
            w.csv.display(),
            w.json.display(),
            w.gnuplot.display()
        );
    }
    Ok(())
}

fn cmd_run(a: &RunArgs, caps: OracleCaps) -> CliResult {
    let instance = read_instance(&a.instance).map_err(err)?;
    let algorithm = match a.algorithm {
        AlgorithmArg::Mimic => Algorithm::Mimic { omega: a.omega },
        AlgorithmArg::Disc => Algorithm::Disc {
            m_count: a.m_count,
            beta: beta_or_default(a.beta, a.m_count),
        },
        AlgorithmArg::Randomized => Algorithm::Randomized {
            quadrature: a.quadrature,
        },
    };
    let oracle = Oracle::new(&instance, caps);
    let report = ExperimentReport::from_rows(vec![evaluate_with(0, &oracle, algorithm).map_err(err)?]);
    emit(&a.out, "run", &report.rows, &report, &ratio_plot("ratio"))?;
    Ok(report.passed())
}

#[derive(Serialize)]
struct OffsetRow {
    m: usize,
    omega: f64,
    phases: usize,
    cost: f64,
    ratio: f64,
}

fn cmd_disc(a: &DiscArgs, caps: OracleCaps) -> CliResult {
    let instance = read_instance(&a.instance).map_err(err)?;
    let oracle = Oracle::new(&instance, caps);
    let opt = oracle.optimal_offline().map_err(err)?.cost.total;
    let run = run_disc(&oracle, a.m_count, beta_or_default(a.beta, a.m_count)).map_err(err)?;
    let rows: Vec<OffsetRow> = run
        .traces
        .iter()
        .map(|t| OffsetRow {
            m: t.m,
            omega: t.omega,
            phases: t.phases.len(),
            cost: t.cost.total,
            ratio: t.cost.total / opt,
        })
        .collect();
    let ratio = run.expected.total / opt;
    let bound = disc_bound(instance.gamma(), a.m_count);
    eprintln!(
        "E[cost] = {}, OPT = {opt}, ratio = {ratio}, bound = {bound}",
        run.expected.total
    );
    let plot = PlotSpec {
        title: "DISC cost per offset".into(),
        xlabel: "m".into(),
        ylabel: "cost / OPT".into(),
        x_column: 1,
        series: vec![Series::new(5, "ratio", "linespoints")],
        log_x: false,
    };
    let sidecar = serde_json::json!({ "opt": opt, "ratio": ratio, "bound": bound, "run": run });
    emit(&a.out, "disc", &rows, &sidecar, &plot)?;
    Ok(ratio <= bound + BOUND_TOL)
}

fn cmd_tightness(a: &TightnessArgs, caps: OracleCaps) -> CliResult {
    if a.epsilon.iter().any(|&e| e.is_nan() || e <= 0.0) {
        return Err("epsilon must be positive".into());
    }
    let rows = tightness_report(a.gamma, a.omega, &a.epsilon, a.quadrature, caps).map_err(err)?;
    let two_job: Vec<_> = rows.iter().filter(|r| r.construction == "two-job").collect();
    let mut ok = two_job
        .iter()
        .all(|r| r.ratio >= r.expected - BOUND_TOL && r.ratio <= r.target + BOUND_TOL);
    let mut sorted = two_job.clone();
    sorted.sort_by(|x, y| y.epsilon.partial_cmp(&x.epsilon).expect("finite epsilon"));
    ok &= sorted.windows(2).all(|w| w[1].gap <= w[0].gap + BOUND_TOL);
    ok &= rows
        .iter()
        .filter(|r| r.construction != "two-job")
        .all(|r| (r.ratio - r.target).abs() <= 1e-5);
    let plot = PlotSpec {
        title: format!("two-job construction, gamma = {}", a.gamma),
        xlabel: "epsilon".into(),
        ylabel: "ratio".into(),
        x_column: 5,
        series: vec![Series::new(6, "ratio", "linespoints"), Series::new(7, "bound", "lines")],
        log_x: true,
    };
    emit(&a.out, "tightness", &rows, &rows, &plot)?;
    Ok(ok)
}

fn cmd_flaw(a: &FlawArgs) -> CliResult {
    let rows = flaw_table(&a.k, &a.v, &a.m_list).map_err(err)?;
    let m_top = a.m_list.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut ok = true;
    for r in rows.iter().filter(|r| r.m == m_top) {
        if r.distance_to_claim > a.tolerance {
            ok = false;
            eprintln!(
                "k={} v={}: L at m={} is {:.6}, {:.3e} from {CLAIMED_LIMIT}; the limit is {:.6}",
                r.k, r.v, r.m, r.value, r.distance_to_claim, r.limit
            );
        }
    }
    let plot = PlotSpec {
        title: "L_{m,v}".into(),
        xlabel: "m".into(),
        ylabel: "L".into(),
        x_column: 3,
        series: vec![
            Series::new(4, "L", "points"),
            Series::new(5, "claimed", "lines"),
            Series::new(6, "limit", "points"),
        ],
        log_x: true,
    };
    emit(&a.out, "flaw", &rows, &rows, &plot)?;
    Ok(ok)
}

#[derive(Serialize)]
struct FamilyRow {
    family: u8,
    label: &'static str,
    rows: usize,
    max_violation: f64,
    tight_rows: usize,
}

fn cmd_audit(a: &AuditArgs, caps: OracleCaps) -> CliResult {
    let instance = read_instance(&a.instance).map_err(err)?;
    let oracle = Oracle::new(&instance, caps);
    let opts = AuditOptions {
        exact: a.exact,
        ..AuditOptions::new(a.m_count, beta_or_default(a.beta, a.m_count))
    };
    let (report, lp, _) = audit_full(&instance, &oracle, opts).map_err(err)?;
    let mut ok = report.passed();
    if let Some(path) = &a.export_lp {
        export_lp(&lp, path).map_err(err)?;
        let parsed = read_lp(path).map_err(err)?;
        if parsed != lp.to_model() {
            ok = false;
            eprintln!("{} does not parse back to the same LP", path.display());
        }
    }
    let m = report.m_count as f64;
    eprintln!(
        "K = {}, Q = {}; M*E[cost]/OPT = {} <= P* = {} <= dual = {} (M*bound = {})",
        report.k,
        report.q_max,
        m * report.ratio,
        report.primal_optimum.map_or("n/a".to_string(), |p| p.to_string()),
        report.dual.objective,
        m * report.bound
    );
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    let rows: Vec<FamilyRow> = report
        .primal
        .families
        .iter()
        .map(|f| FamilyRow {
            family: f.family.number(),
            label: f.family.label(),
            rows: f.rows,
            max_violation: f.max_violation,
            tight_rows: f.tight_rows,
        })
        .collect();
    let plot = PlotSpec {
        title: "primal constraint families".into(),
        xlabel: "family".into(),
        ylabel: "max scaled violation".into(),
        x_column: 1,
        series: vec![Series::new(4, "max violation", "points pt 7")],
        log_x: false,
    };
    emit(&a.out, "audit", &rows, &report, &plot)?;
    Ok(ok)
}

fn write_repro(dir: &Path, report: &resched::experiments::FuzzReport) -> Result<(), String> {
    std::fs::create_dir_all(dir).map_err(err)?;
    let params = serde_json::to_string_pretty(&report.config).map_err(err)?;
    std::fs::write(dir.join("params.json"), params + "\n").map_err(err)?;
    for f in &report.failures {
        std::fs::write(dir.join(format!("instance-{}.json", f.id)), &f.instance_json).map_err(err)?;
        std::fs::write(dir.join(format!("instance-{}.txt", f.id)), f.messages.join("\n") + "\n").map_err(err)?;
    }
    Ok(())
}

fn cmd_fuzz(a: &FuzzArgs, caps: OracleCaps) -> CliResult {
    let problem = ProblemKind::from(a.problem);
    let generator = GeneratorConfig::new(problem)
        .with_jobs(a.max_jobs)
        .with_machines(a.machines)
        .with_precedence(a.precedence);
    let mut cfg = FuzzConfig::new(generator, a.count, a.seed)
        .with_disc(FuzzConfig::standard_disc(), !a.no_audit)
        .with_exact(a.exact);
    cfg.caps = caps;
    let report = fuzz(&cfg);
    let agg = &report.report.aggregate;
    eprintln!(
        "{} instances, {} rows, max ratio {}, {} bound violations, {} failing instances",
        a.count,
        agg.count,
        agg.max_ratio,
        agg.violations,
        report.failures.len()
    );
    if !report.failures.is_empty() {
        write_repro(&a.repro_dir, &report)?;
        eprintln!("repro bundle in {}", a.repro_dir.display());
    }
    emit(
        &a.out,
        &format!("fuzz-{problem}"),
        &report.report.rows,
        &report,
        &ratio_plot(&format!("{problem} fuzz")),
    )?;
    Ok(report.passed())
}

fn cmd_export(a: &ExportArgs) -> CliResult {
    let grid = PhaseGrid::new(a.gamma, a.m_count, beta_or_default(a.beta, a.m_count), a.min_i).map_err(err)?;
    let lp = build_primal(&grid, a.k).map_err(err)?;
    export_lp(&lp, &a.output).map_err(err)?;
    let same = read_lp(&a.output).map_err(err)? == lp.to_model();
    eprintln!(
        "{} variables, {} rows written to {}",
        lp.variables.len(),
        lp.rows.len(),
        a.output.display()
    );
    Ok(same)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(raw) = std::env::var("RESCHED_TOL") {
        if raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .is_none()
        {
            eprintln!("error: RESCHED_TOL must be a positive number, got {raw:?}");
            return ExitCode::from(2);
        }
        eprintln!("audit tolerance {:e}", audit_tolerance());
    }
    let caps = cli.caps.caps();
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, caps),
        Command::Disc(a) => cmd_disc(a, caps),
        Command::Tightness(a) => cmd_tightness(a, caps),
        Command::Flaw(a) => cmd_flaw(a),
        Command::Audit(a) => cmd_audit(a, caps),
        Command::Fuzz(a) => cmd_fuzz(a, caps),
        Command::ExportLp(a) => cmd_export(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
