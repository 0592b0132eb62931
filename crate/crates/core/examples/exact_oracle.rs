//! Exhaustive best action sequence for a tiny deterministic-cost instance,
//! next to the fluid LP bound.

use roguewk::env::EpisodeConfig;
use roguewk::policy::{exact_oracle, lp_upper_bound};

const CONFIG: &str = r#"{
  "arms": [
    {"A": 0.5, "B": -1.0, "K": 0.5, "alpha": 0.0, "beta": 2.0, "cost_low": [0.3], "cost_high": [0.3]},
    {"A": 0.2, "B": -0.2, "K": 0.1, "alpha": 0.2, "beta": 1.0, "cost_low": [0.1], "cost_high": [0.1]}
  ],
  "x0": [1.0, 0.1],
  "T": 8,
  "budget": 1.2
}"#;

fn main() -> roguewk::Result<()> {
    let config = EpisodeConfig::from_json(CONFIG)?;
    let best = exact_oracle(&config)?;
    let seq: Vec<String> = best
        .sequence
        .iter()
        .map(|c| c.map_or("-".to_string(), |a| a.to_string()))
        .collect();
    println!("oracle value   = {:.6}", best.value);
    println!("best sequence  = {}", seq.join(" "));
    println!("LP upper bound = {:.6}", lp_upper_bound(&config)?);
    Ok(())
}
