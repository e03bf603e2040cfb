//! Seeded instance generation, JSON round trip, and schedule validation.
//!
//! cargo run --example generate_instances [seed]

use resched::generator::{generate, GeneratorConfig};
use resched::io::{instance_from_json, instance_to_json};
use resched::model::ProblemKind;
use resched::oracle::Oracle;
use resched::problems::{min_completion, validate_schedule, ExecutorState, OracleCaps};

fn main() -> resched::Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map_or(11, |s| s.parse().expect("seed must be an integer"));
    let configs = [
        GeneratorConfig::new(ProblemKind::Trp),
        GeneratorConfig::new(ProblemKind::Darp),
        GeneratorConfig::new(ProblemKind::Machines)
            .with_machines(3)
            .with_precedence(0.4),
    ];
    for cfg in &configs {
        for index in 0..3 {
            let instance = generate(cfg, seed, index)?;
            let text = instance_to_json(&instance)?;
            assert_eq!(instance_from_json(&text)?, instance);
            let opt = Oracle::new(&instance, OracleCaps::default()).optimal_offline()?;
            let valid = validate_schedule(&opt.schedule, &instance, &ExecutorState::initial(&instance));
            println!(
                "{} #{index}: {} jobs, min(I) = {:.4}, OPT = {:.4}, schedule {}",
                instance.kind(),
                instance.len(),
                min_completion(&instance)?,
                opt.cost.total,
                if valid.is_ok() { "valid" } else { "INVALID" }
            );
        }
    }
    println!("{}", instance_to_json(&generate(&configs[0], seed, 0)?)?);
    Ok(())
}
