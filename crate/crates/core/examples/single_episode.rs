//! Play one episode of the three-arm benchmark instance with each policy and
//! print how long it lasted and what it earned.
//!
//!     cargo run --release --example single_episode -- 150 7

use roguewk::env::three_arm_config;
use roguewk::harness::run_episode;
use roguewk::policy::{PolicyKind, PolicySettings};

fn main() -> roguewk::Result<()> {
    let mut args = std::env::args().skip(1);
    let budget: f64 = args.next().map_or(100.0, |s| s.parse().expect("budget"));
    let seed: u64 = args.next().map_or(2024, |s| s.parse().expect("seed"));

    let config = three_arm_config().with_budget(budget);
    let settings = PolicySettings::for_config(&config);
    println!("T = {}, B = {budget}, seed = {seed}", config.horizon);
    println!("{:<12} {:>8} {:>6} {:>6}  pulls", "policy", "reward", "tau", "plays");
    for kind in [PolicyKind::RoguewkUcb, PolicyKind::SwUcb, PolicyKind::NaiveUcb] {
        let rec = run_episode(&config, kind, &settings, seed)?;
        println!(
            "{:<12} {:>8} {:>6} {:>6}  {:?}",
            rec.policy, rec.cumulative_reward, rec.tau, rec.plays, rec.per_arm_pulls
        );
    }
    Ok(())
}
