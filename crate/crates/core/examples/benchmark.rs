//! Run a reduced budget grid and write results.csv, summary.csv and
//! improvement.txt. Set ROGUEWK_THREADS to cap the worker threads.
//!
//!     cargo run --release --example benchmark -- /tmp/roguewk-bench

use roguewk::harness::{run_benchmark, write_results};
use roguewk::spec::BenchmarkSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "target/example-bench".into());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/default_bench.json");
    let spec = BenchmarkSpec::load(
        path.as_ref(),
        &[
            "budgets=[50, 100, 200]".into(),
            "replicates=4".into(),
            format!("output_dir={out}"),
        ],
    )?;
    let outcome = run_benchmark(&spec)?;
    write_results(&spec.output_dir, &outcome, spec.base_config.arm_count())?;

    for row in &outcome.summary {
        println!(
            "{:<12} B={:<6} median {:>6} IQR [{}, {}]",
            row.policy, row.budget, row.median_reward, row.q1, row.q3
        );
    }
    match outcome.improvement {
        Some(v) => println!("improvement over sw_ucb: {:.1}%", 100.0 * v),
        None => println!("improvement over sw_ucb: NA"),
    }
    println!("wrote {}", spec.output_dir.display());
    Ok(())
}
