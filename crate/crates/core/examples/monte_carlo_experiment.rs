//! A small seeded experiment: per-trial records, CSV output and the summary against the
//! asymptotic predictions.
//!
//! cargo run --release --example monte_carlo_experiment

use upper_complex::harness::{aggregate_and_compare, run_experiment, to_csv, ExperimentConfig};

fn main() -> upper_complex::Result<()> {
    let cfg = ExperimentConfig { n: 200, r: 1, alpha: vec![0.0, 0.5], trials: 40, seed: 11, ..Default::default() };
    let exp = run_experiment(&cfg)?;
    let summary = aggregate_and_compare(&exp.records, &exp.profile, cfg.n, cfg.omega);

    let csv = to_csv(&exp.records, cfg.r, summary.ell)?;
    print!("{}", String::from_utf8_lossy(&csv).lines().take(4).collect::<Vec<_>>().join("\n"));
    println!("\n...");
    for (name, s) in &summary.stats {
        println!("{name:>10}: mean {:.2} ± {:.2}", s.mean, s.stderr);
    }
    for c in &summary.comparisons {
        println!("{:>24}: {:.3} in {:?} -> {}", c.name, c.value, c.band, if c.passed { "ok" } else { "off" });
    }
    println!("law violations: {}", summary.law_violations);
    Ok(())
}
