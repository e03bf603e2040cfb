//! Phase-by-phase trace of MIMIC(gamma, omega).
//!
//! cargo run --example mimic_run [instance.json] [omega]

use resched::io::read_instance;
use resched::mimic::{deterministic_bound, run_mimic};
use resched::oracle::Oracle;
use resched::problems::OracleCaps;

fn main() -> resched::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/trp_two_job.json").into());
    let omega: f64 = args.next().map_or(0.0, |s| s.parse().expect("omega must be a number"));
    let instance = read_instance(&path)?;
    let oracle = Oracle::new(&instance, OracleCaps::default());

    let run = run_mimic(&oracle, omega)?;
    for p in &run.phases {
        println!(
            "phase {} at tau = {:.4}: arrived {:?}, S_tau completes {:?}, fresh {:?}",
            p.k + 1,
            p.tau,
            p.arrived.iter().collect::<Vec<_>>(),
            p.completed.iter().collect::<Vec<_>>(),
            p.fresh.iter().collect::<Vec<_>>()
        );
    }
    let opt = oracle.optimal_offline()?.cost.total;
    println!("cost {} / OPT {} = {:.6}", run.cost.total, opt, run.cost.total / opt);
    println!("bound 3 + gamma = {}", deterministic_bound(instance.gamma()));
    Ok(())
}
