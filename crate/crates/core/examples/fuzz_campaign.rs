//! Generated instances through the whole chain, with the report written as
//! CSV, JSON and a gnuplot script.
//!
//! cargo run --release --example fuzz_campaign [count] [out-dir]

use resched::experiments::output::{ratio_plot, write_bundle};
use resched::experiments::{fuzz, FuzzConfig};
use resched::generator::GeneratorConfig;
use resched::model::ProblemKind;

fn main() -> resched::Result<()> {
    let mut args = std::env::args().skip(1);
    let count: usize = args.next().map_or(50, |s| s.parse().expect("count must be an integer"));
    let dir = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("resched-fuzz").display().to_string());
    let families = [
        GeneratorConfig::new(ProblemKind::Trp).with_jobs(6),
        GeneratorConfig::new(ProblemKind::Darp).with_jobs(6),
        GeneratorConfig::new(ProblemKind::Machines)
            .with_jobs(6)
            .with_precedence(0.3),
    ];
    for generator in families {
        let problem = generator.problem;
        let cfg = FuzzConfig::new(generator, count, 7).with_disc(FuzzConfig::standard_disc(), true);
        let start = std::time::Instant::now();
        let report = fuzz(&cfg);
        let agg = &report.report.aggregate;
        println!(
            "{problem}: {} rows, max ratio {:.6}, min margin {:.2e}, {} failures, {:?}",
            agg.count,
            agg.max_ratio,
            agg.min_margin,
            report.failures.len(),
            start.elapsed()
        );
        let stem = format!("fuzz-{problem}");
        write_bundle(&dir, &stem, &report.report.rows, &report, &ratio_plot(&stem))?;
    }
    println!("reports in {dir}");
    Ok(())
}
