//! DISC(gamma, M, beta) for several M: the exact expectation over the
//! offsets against the bound `1 + (1/M) sum alpha^(j/M)`.
//!
//! cargo run --example disc_expectation [instance.json]

use resched::io::read_instance;
use resched::mimic::{disc_bound, run_disc};
use resched::oracle::Oracle;
use resched::problems::OracleCaps;

fn main() -> resched::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/machines_precedence.json").into());
    let instance = read_instance(&path)?;
    let oracle = Oracle::new(&instance, OracleCaps::default());
    let opt = oracle.optimal_offline()?.cost.total;

    println!(
        "{:>2} {:>8} {:>10} {:>10}  per-offset ratios",
        "M", "beta", "E ratio", "bound"
    );
    for m_count in 1..=4 {
        for beta in [0.5 / m_count as f64, 1.0 / m_count as f64] {
            let run = run_disc(&oracle, m_count, beta)?;
            let per_offset: Vec<String> = run
                .traces
                .iter()
                .map(|t| format!("{:.3}", t.cost.total / opt))
                .collect();
            println!(
                "{m_count:>2} {beta:>8.4} {:>10.6} {:>10.6}  {}",
                run.expected.total / opt,
                disc_bound(instance.gamma(), m_count),
                per_offset.join(" ")
            );
        }
    }
    Ok(())
}
