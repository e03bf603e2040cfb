//! The lower-bound constructions: the two-job instance pushes MIMIC to
//! `3 + gamma` as epsilon shrinks; one job pins the randomized ratio.
//!
//! cargo run --example tightness

use resched::experiments::tightness_report;
use resched::problems::OracleCaps;

fn main() -> resched::Result<()> {
    let epsilons = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
    for gamma in [1.0, 0.5, 0.0] {
        println!("gamma = {gamma}");
        for r in tightness_report(gamma, 0.0, &epsilons, 16, OracleCaps::default())? {
            match r.epsilon {
                Some(eps) => println!(
                    "  {} ({}), eps {eps:.0e}: ratio {:.6}, gap to {} is {:.2e}",
                    r.construction, r.problem, r.ratio, r.target, r.gap
                ),
                None => println!(
                    "  {} ({}): ratio {:.8}, closed form {:.8}",
                    r.construction, r.problem, r.ratio, r.target
                ),
            }
        }
    }
    Ok(())
}
