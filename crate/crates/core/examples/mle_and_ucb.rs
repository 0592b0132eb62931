//! Simulate pulls of one arm, fit its initial state by maximum likelihood
//! and compare the fitted and optimistic rewards with the truth.
//!
//! The dynamics contract, so x0 itself is weakly identified; what matters
//! is that the state it implies for the current round is accurate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roguewk::env::three_arm_config;
use roguewk::estimation::{confidence_radius, ConfidenceConfig, Evidence};

fn main() -> roguewk::Result<()> {
    let config = three_arm_config();
    let arm = &config.arms[1];
    let conf = ConfidenceConfig::for_config(&config);
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    // Pull every other round so the state keeps moving.
    let mut evidence = Evidence::new(true);
    let mut x = config.x0[1];
    let mut n = 0;
    println!("true x0 = {}", config.x0[1]);
    println!("{:>6} {:>10} {:>10} {:>8} {:>8} {:>8}", "pulls", "x0_hat", "radius", "g_true", "g_fit", "g_ucb");
    for t in 0..400 {
        let pulled = t % 2 == 0;
        let reward = pulled.then(|| u8::from(rng.random::<f64>() < arm.expected_reward(x)));
        evidence.record_round(arm, reward);
        n += usize::from(pulled);
        x = arm.transition(x, pulled)?;
        if pulled && n.is_power_of_two() && n >= 4 {
            let x_hat = evidence.mle(arm)?;
            let radius = confidence_radius(n, config.arm_count(), config.horizon, &conf);
            let fit = evidence.reward_ucb(arm, x_hat, 0.0);
            let ucb = evidence.reward_ucb(arm, x_hat, radius);
            println!(
                "{n:>6} {x_hat:>10.4} {radius:>10.2} {:>8.4} {fit:>8.4} {ucb:>8.4}",
                arm.expected_reward(x)
            );
        }
    }
    Ok(())
}
