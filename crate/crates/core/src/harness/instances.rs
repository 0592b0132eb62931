use rand::Rng;

use crate::env::{ArmParams, ConfigFile, EpisodeConfig};
use crate::error::Result;
use crate::policy::{exact_oracle, lp_upper_bound};
use crate::rng::{self, Stream};

/// A random deterministic-cost instance small enough for the exact oracle:
/// `m <= 3` arms, `d <= 2` resources, `T <= 10` rounds.
pub fn random_tiny_instance<R: Rng + ?Sized>(rng: &mut R) -> EpisodeConfig {
    let m = rng.random_range(1..=3);
    let d = rng.random_range(1..=2);
    let horizon = rng.random_range(1..=10);
    let arms: Vec<ArmParams> = (0..m)
        .map(|_| {
            let cost: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..=1.0)).collect();
            ArmParams {
                a: rng.random_range(-0.9..0.9),
                b: rng.random_range(-1.5..1.5),
                k: rng.random_range(-1.0..1.0),
                alpha: rng.random_range(-1.0..1.0),
                beta: rng.random_range(-2.0..2.0),
                cost_low: cost.clone(),
                cost_high: cost,
            }
        })
        .collect();
    let x0 = (0..m).map(|_| rng.random_range(-1.0..1.0)).collect();
    let rate: f64 = rng.random_range(0.05..=1.0);
    EpisodeConfig::from_file(&ConfigFile {
        arms,
        x0,
        horizon,
        budget: rate * horizon as f64,
        seed: 0,
    })
    .expect("generated parameters satisfy validation")
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub config: EpisodeConfig,
    pub oracle: f64,
    pub bound: f64,
}

impl OracleCheck {
    pub fn holds(&self) -> bool {
        self.oracle <= self.bound + 1e-9
    }
}

/// Exact oracle value against the LP upper bound on `count` random tiny
/// instances drawn from the instance stream of `seed`.
pub fn check_upper_bound(count: usize, seed: u64) -> Result<Vec<OracleCheck>> {
    let mut rng = rng::stream(seed, Stream::Instances);
    (0..count)
        .map(|_| {
            let config = random_tiny_instance(&mut rng);
            Ok(OracleCheck {
                oracle: exact_oracle(&config)?.value,
                bound: lp_upper_bound(&config)?,
                config,
            })
        })
        .collect()
}
