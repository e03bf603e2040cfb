//! Extracts the fresh/stale partition of a DISC run, checks it against the
//! factor-revealing primal, solves the primal, and writes it in LP format.
//!
//! cargo run --example primal_lp [instance.json] [out.lp]

use resched::experiments::audit::audit_full;
use resched::experiments::AuditOptions;
use resched::io::read_instance;
use resched::lpaudit::{export_lp, read_lp};
use resched::oracle::Oracle;
use resched::problems::OracleCaps;

fn main() -> resched::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/trp_two_job.json").into());
    let out = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("resched-primal.lp").display().to_string());
    let instance = read_instance(&path)?;
    let oracle = Oracle::new(&instance, OracleCaps::default());

    let opts = AuditOptions {
        exact: true,
        ..AuditOptions::new(2, 0.5)
    };
    let (report, lp, part) = audit_full(&instance, &oracle, opts)?;
    println!(
        "K = {}, Q = {}, {} variables, {} rows",
        report.k,
        part.q_max,
        lp.variables.len(),
        lp.rows.len()
    );
    for f in &report.primal.families {
        println!(
            "  ({}) {:<10} {:>3} rows, max violation {:+.2e}",
            f.family.number(),
            f.family.label(),
            f.rows,
            f.max_violation
        );
    }
    let m = report.m_count as f64;
    println!(
        "objective / M = {:.9}, E[cost]/OPT = {:.9}",
        report.primal.objective_over_m, report.ratio
    );
    if let Some(p) = report.primal_optimum {
        println!(
            "M * ratio = {:.9} <= P* = {p:.9} <= dual = {:.9}",
            m * report.ratio,
            report.dual.objective
        );
    }

    export_lp(&lp, &out)?;
    let same = read_lp(&out)? == lp.to_model();
    println!("wrote {out} (parses back: {same})");
    Ok(())
}
