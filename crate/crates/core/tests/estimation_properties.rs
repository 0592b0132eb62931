use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roguewk::env::{three_arm_config, ArmModel, ArmParams};
use roguewk::estimation::{bernoulli_kl, cost_lcb, trajectory_kl, ActionLog, ArmHistory, Evidence};
use roguewk::harness::run_episode_traced;
use roguewk::policy::{PolicyKind, PolicySettings};

fn arm(a: f64, b: f64, k: f64, alpha: f64, beta: f64, x0: f64) -> ArmModel {
    let params = ArmParams {
        a,
        b,
        k,
        alpha,
        beta,
        cost_low: vec![0.0],
        cost_high: vec![0.0],
    };
    ArmModel::new(0, &params, x0).unwrap()
}

fn evidence(arm: &ArmModel, pulls: &[bool], rewards: &[bool]) -> Evidence {
    let mut ev = Evidence::new(false);
    for (p, r) in pulls.iter().zip(rewards) {
        ev.record_round(arm, p.then_some(u8::from(*r)));
    }
    ev
}

prop_compose! {
    fn instance()(
        a in -0.95f64..0.95, b in -2.0f64..2.0, k in -1.0f64..1.0,
        alpha in -1.0f64..1.0, beta in -2.0f64..2.0, x0 in -1.0f64..1.0,
        pulls in proptest::collection::vec(any::<bool>(), 1..30),
        rewards in proptest::collection::vec(any::<bool>(), 30),
    ) -> (ArmModel, Vec<bool>, Vec<bool>) {
        (arm(a, b, k, alpha, beta, x0), pulls, rewards)
    }
}

proptest! {
    #[test]
    fn bernoulli_kl_nonnegative(p in 0.001f64..0.999, q in 0.001f64..0.999) {
        prop_assert!(bernoulli_kl(p, q) >= 0.0);
        prop_assert!(bernoulli_kl(p, p).abs() < 1e-15);
    }

    #[test]
    fn trajectory_kl_nonnegative_and_zero_on_diagonal(
        (arm, pulls, _r) in instance(), u in 0.0f64..1.0, v in 0.0f64..1.0,
    ) {
        let log: ActionLog = pulls.iter().map(|&p| p.then_some(0)).collect();
        let dom = arm.state_domain;
        let (x, y) = (dom.lo + u * dom.width(), dom.lo + v * dom.width());
        prop_assert!(trajectory_kl(&arm, x, y, &log) >= 0.0);
        prop_assert_eq!(trajectory_kl(&arm, x, x, &log), 0.0);
    }

    #[test]
    fn divergence_grows_away_from_estimate(
        (arm, pulls, rewards) in instance(), c in 0.0f64..1.0,
    ) {
        let ev = evidence(&arm, &pulls, &rewards);
        let dom = arm.state_domain;
        let x_hat = dom.lo + c * dom.width();
        let mut last = 0.0;
        for i in 1..=50 {
            let x = x_hat + (dom.hi - x_hat) * i as f64 / 50.0;
            let d = ev.divergence(&arm, x, x_hat);
            prop_assert!(d >= last - 1e-12);
            last = d;
        }
        last = 0.0;
        for i in 1..=50 {
            let x = x_hat - (x_hat - dom.lo) * i as f64 / 50.0;
            let d = ev.divergence(&arm, x, x_hat);
            prop_assert!(d >= last - 1e-12);
            last = d;
        }
    }

    #[test]
    fn log_likelihood_concave((arm, pulls, rewards) in instance()) {
        let ev = evidence(&arm, &pulls, &rewards);
        let dom = arm.state_domain;
        let h = dom.width() / 100.0;
        for i in 1..100 {
            let x = dom.lo + i as f64 * h;
            let second = ev.log_likelihood(&arm, x + h) - 2.0 * ev.log_likelihood(&arm, x)
                + ev.log_likelihood(&arm, x - h);
            prop_assert!(second <= 1e-8);
        }
    }

    #[test]
    fn reward_ucb_nondecreasing_in_radius(
        (arm, mut pulls, rewards) in instance(), c in 0.0f64..1.0,
    ) {
        pulls[0] = true;
        let ev = evidence(&arm, &pulls, &rewards);
        let dom = arm.state_domain;
        let x_hat = dom.lo + c * dom.width();
        let mut last = f64::NEG_INFINITY;
        for e in -8..=2 {
            let u = ev.reward_ucb(&arm, x_hat, 10f64.powi(e));
            prop_assert!(u >= last - 1e-12);
            last = u;
        }
        prop_assert!(ev.reward_ucb(&arm, x_hat, 0.0) <= last);
    }

    #[test]
    fn cost_lcb_below_mean(costs in proptest::collection::vec(0.0f64..1.0, 1..200)) {
        let mut h = ArmHistory::default();
        for (t, c) in costs.iter().enumerate() {
            h.record(t, 0, vec![*c]).unwrap();
        }
        prop_assert!(cost_lcb(&h, 0, 3, 1, 1000).unwrap() < h.mean_cost(0));
    }
}

#[test]
fn cost_lcb_radius_vanishes() {
    // radius(n) = sqrt(log(12 m d T^2) / (2 n)); at n = 1e8 with m = d = 3,
    // T = 1000 it is below 1e-3.
    let radius = ((12.0f64 * 9.0 * 1e6).ln() / (2.0 * 1e8)).sqrt();
    assert!(radius < 1e-3);
    let mut h = ArmHistory::default();
    h.record(0, 0, vec![0.5]).unwrap();
    let one = cost_lcb(&h, 0, 3, 3, 1000).unwrap();
    assert!((one - (0.5 - (0.5 * (12.0f64 * 9.0 * 1e6).ln()).sqrt())).abs() < 1e-12);
}

#[test]
fn ucb_covers_true_reward_in_most_episodes() {
    let cfg = three_arm_config().with_horizon(150, 0.3);
    let settings = PolicySettings::for_config(&cfg);
    assert_eq!(settings.confidence.radius_scale, 1.0);
    let mut covered = 0;
    for seed in 0..500 {
        let ep = run_episode_traced(&cfg, PolicyKind::RoguewkUcb, &settings, seed).unwrap();
        let ok = ep.trace.iter().all(|row| match &row.bundle {
            Some(b) => b
                .g_ucb
                .iter()
                .zip(&row.x_true)
                .zip(&cfg.arms)
                .all(|((u, &x), arm)| arm.expected_reward(x) <= u + 1e-12),
            None => true,
        });
        covered += usize::from(ok);
    }
    assert!(covered as f64 >= 0.95 * 500.0, "covered {covered} of 500");
}

#[test]
fn random_mle_lands_inside_domain() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let a = arm(
            rng.random_range(-0.9..0.9),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-2.0..2.0),
            rng.random_range(-1.0..1.0),
        );
        let pulls: Vec<bool> = (0..30).map(|i| i == 0 || rng.random_bool(0.5)).collect();
        let rewards: Vec<bool> = (0..30).map(|_| rng.random_bool(0.5)).collect();
        let ev = evidence(&a, &pulls, &rewards);
        let x = ev.mle(&a).unwrap();
        assert!(a.state_domain.contains(x));
        // No grid point beats the golden-section maximizer.
        let best = ev.log_likelihood(&a, x);
        for i in 0..=1000 {
            let y = a.state_domain.lo + a.state_domain.width() * i as f64 / 1000.0;
            assert!(ev.log_likelihood(&a, y) <= best + 1e-9);
        }
    }
}
