//! OPT and the prize-collecting schedules `S_tau` on a small TRP instance.
//!
//! cargo run --example offline_oracle [instance.json]

use resched::io::read_instance;
use resched::model::{val, TimePoint};
use resched::oracle::Oracle;
use resched::problems::{enumerate_schedules, min_completion, OracleCaps};

fn main() -> resched::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/trp_line.json").into());
    let instance = read_instance(&path)?;
    let caps = OracleCaps::default();
    let oracle = Oracle::new(&instance, caps);

    let opt = oracle.optimal_offline()?;
    println!("min(I) = {}", min_completion(&instance)?);
    println!("OPT = {}", opt.cost.total);
    for (job, c) in &opt.schedule.completions {
        println!("  job {job} done at {c}");
    }

    for tau in [1.0, 2.5, 4.0, 8.0, 16.0] {
        let tau = TimePoint::new(tau)?;
        let arrived = instance.arrived_by(tau.value());
        let best = oracle.best_tau_schedule(tau)?;
        let candidates = enumerate_schedules(arrived, tau, &instance, &caps)?.count();
        println!(
            "tau = {:>4}: {} arrived, S_tau completes {:?}, val = {:.4} ({} candidates)",
            tau.value(),
            arrived.len(),
            best.completed.iter().collect::<Vec<_>>(),
            val(&best.schedule, tau, arrived, &instance)?,
            candidates
        );
    }
    Ok(())
}
