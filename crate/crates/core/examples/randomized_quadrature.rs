//! Expected cost of MIMIC with a uniform offset, integrated piece by piece
//! between the offsets where the run changes.
//!
//! cargo run --example randomized_quadrature

use resched::experiments::tightness::one_job_instance;
use resched::io::read_instance;
use resched::mimic::{randomized_bound, randomized_expected_cost};
use resched::oracle::Oracle;
use resched::problems::OracleCaps;

fn main() -> resched::Result<()> {
    let line = read_instance(concat!(env!("CARGO_MANIFEST_DIR"), "/data/trp_line.json"))?;
    let instances = [
        ("one job, gamma 1", one_job_instance(1.0)?),
        ("one job, gamma 0", one_job_instance(0.0)?),
        ("trp_line", line),
    ];
    for (name, instance) in &instances {
        let oracle = Oracle::new(instance, OracleCaps::default());
        let r = randomized_expected_cost(&oracle, 16)?;
        let opt = oracle.optimal_offline()?.cost.total;
        println!(
            "{name}: E ratio {:.10}, bound {:.10}",
            r.expected_cost / opt,
            randomized_bound(instance.gamma())
        );
        println!(
            "  {} pieces, {} runs, rule gap {:.2e}",
            r.pieces.len(),
            r.evaluations,
            r.rule_gap
        );
        for (lo, hi) in &r.pieces {
            println!("    omega in ({lo:.6}, {hi:.6})");
        }
    }
    Ok(())
}
