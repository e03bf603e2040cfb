//! Builds the closed-form dual for a sweep of (gamma, M, K), verifies every
//! constraint and identity, and compares the objective with
//! `M + sum_j alpha^(j/M)`.
//!
//! cargo run --release --example dual_certificate

use resched::lpaudit::{build_dual, expected_dual_objective, verify_dual};
use resched::mimic::PhaseGrid;

fn main() -> resched::Result<()> {
    let start = std::time::Instant::now();
    for gamma in [0.0, 0.5, 1.0] {
        for m_count in 1..=5 {
            let mut worst = f64::INFINITY;
            let mut ok = true;
            for k in 1..=6 {
                let grid = PhaseGrid::new(gamma, m_count, 1.0 / m_count as f64, 1.0)?;
                let report = verify_dual(&build_dual(&grid, k)?, 1e-9);
                ok &= report.feasible && report.tight_families_hold() && report.identities_hold();
                ok &= report.objective_rel_error() <= 1e-12;
                worst = worst.min(
                    report
                        .families
                        .iter()
                        .map(|f| f.min_slack)
                        .fold(f64::INFINITY, f64::min),
                );
            }
            println!(
                "gamma {gamma} M {m_count}: objective {:.12}, min scaled slack {worst:+.2e}, {}",
                expected_dual_objective(gamma, m_count),
                if ok { "certified" } else { "FAILED" }
            );
        }
    }
    println!("{:?}", start.elapsed());
    Ok(())
}
