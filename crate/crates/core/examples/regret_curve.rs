//! Regret proxy (LP bound minus mean reward) against horizon on stationary
//! arms, with the fitted log-log slope.

use roguewk::env::EpisodeConfig;
use roguewk::harness::regret_proxy_curve;
use roguewk::policy::{PolicyKind, PolicySettings};

fn main() -> roguewk::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/configs/stationary.json");
    let template = EpisodeConfig::load(path.as_ref())?;
    for kind in [PolicyKind::RoguewkUcb, PolicyKind::FixedArm(0)] {
        let curve = regret_proxy_curve(kind, &template, 0.2, &[250, 500, 1000], 5, 0, PolicySettings::for_config)?;
        println!("{}", curve.policy);
        for p in &curve.points {
            println!("  T={:<5} bound {:>8.2} reward {:>8.2} proxy {:>7.2}", p.horizon, p.bound, p.mean_reward, p.proxy);
        }
        println!("  slope {:.3}", curve.slope);
    }
    Ok(())
}
