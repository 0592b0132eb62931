use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roguewk::env::{three_arm_config, EpisodeConfig, StepOutcome};
use roguewk::harness::random_tiny_instance;
use roguewk::lp::{self, LpInstance, LpSolution};
use roguewk::policy::{
    self, exact_oracle, sample, Observed, Policy, PolicyKind, PolicySettings, SwUcb, SwUcbConfig,
};

const KINDS: [PolicyKind; 3] = [PolicyKind::RoguewkUcb, PolicyKind::NaiveUcb, PolicyKind::SwUcb];

/// Upper 0.1% points of the chi-squared distribution, indexed by degrees of
/// freedom.
const CHI2_999: [f64; 6] = [f64::NAN, 10.828, 13.816, 16.266, 18.467, 20.515];

fn chi_squared(pi: &LpSolution, draws: &[Option<usize>]) -> (f64, usize) {
    let n = draws.len() as f64;
    let mut cells: Vec<(f64, usize)> = pi
        .pi
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(a, &p)| (p, draws.iter().filter(|d| **d == Some(a)).count()))
        .collect();
    if pi.null_mass > 0.0 {
        cells.push((pi.null_mass, draws.iter().filter(|d| d.is_none()).count()));
    }
    let stat = cells
        .iter()
        .map(|&(p, k)| (k as f64 - n * p).powi(2) / (n * p))
        .sum();
    (stat, cells.len().saturating_sub(1))
}

fn random_observed(cfg: &EpisodeConfig, rounds: usize, rng: &mut ChaCha8Rng) -> Observed {
    let mut obs = Observed::new(cfg.arm_count());
    for t in 0..rounds {
        let arm = if t < cfg.arm_count() { Some(t) } else { Some(rng.random_range(0..cfg.arm_count())) };
        obs.record(&StepOutcome {
            arm,
            reward: u8::from(rng.random_bool(0.6)),
            cost: (0..cfg.resources()).map(|_| rng.random_range(0.0..0.6)).collect(),
        })
        .unwrap();
    }
    obs
}

#[test]
fn sampled_arms_follow_plan() {
    let cfg = three_arm_config();
    let settings = PolicySettings::for_config(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut plans = vec![LpSolution {
        pi: vec![0.2, 0.0, 0.5],
        null_mass: 0.3,
        value: 0.0,
    }];
    for kind in KINDS {
        let obs = random_observed(&cfg, 40, &mut rng);
        plans.push(policy::build(kind, &cfg, &settings).unwrap().plan(&obs).unwrap().pi);
    }
    for pi in plans {
        let draws: Vec<Option<usize>> = (0..10_000).map(|_| sample(&pi, &mut rng)).collect();
        for d in draws.iter().flatten() {
            assert!(pi.pi[*d] > 0.0);
        }
        let (stat, df) = chi_squared(&pi, &draws);
        if df > 0 {
            assert!(stat < CHI2_999[df], "chi2 {stat} with {df} dof for {pi:?}");
        }
    }
}

#[test]
fn dominant_arm_always_chosen() {
    let inst = LpInstance {
        objective: vec![0.0, 1.0, 0.0],
        costs: vec![vec![0.5], vec![0.0], vec![0.5]],
        rate: 0.1,
    };
    let pi = lp::solve(&inst).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..1000 {
        assert_eq!(sample(&pi, &mut rng), Some(1));
    }
}

#[test]
fn decisions_are_deterministic_given_seed() {
    let cfg = three_arm_config();
    let settings = PolicySettings::for_config(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let obs = random_observed(&cfg, 60, &mut rng);
    for kind in KINDS {
        let decide = || {
            let mut r = ChaCha8Rng::seed_from_u64(9);
            policy::build(kind, &cfg, &settings).unwrap().decide(&obs, &mut r).unwrap()
        };
        assert_eq!(decide(), decide());
    }
}

#[test]
fn roguewk_never_picks_zero_mass_arm() {
    let cfg = three_arm_config().with_horizon(300, 0.1);
    let settings = PolicySettings::for_config(&cfg);
    let mut policy = policy::build(PolicyKind::RoguewkUcb, &cfg, &settings).unwrap();
    let mut state = roguewk::BanditState::new(&cfg);
    let mut obs = Observed::new(cfg.arm_count());
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    while !state.terminated {
        let d = policy.decide(&obs, &mut rng).unwrap();
        if let Some(a) = d.chosen {
            assert!(d.pi.pi[a] > 0.0);
        }
        let out = state.step(&cfg, d.chosen, &mut rng).unwrap();
        obs.record(&out).unwrap();
    }
}

#[test]
fn full_window_matches_stationary_ucb() {
    let cfg = three_arm_config();
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let obs = random_observed(&cfg, 200, &mut rng);
    let sw = SwUcbConfig {
        window: cfg.horizon,
        radius_coeff: 2.0,
    };
    let bundle = SwUcb::new(&cfg, sw).bundle(&obs);
    let log_t = (cfg.horizon as f64).ln();
    for (a, h) in obs.histories.iter().enumerate() {
        let n = h.n() as f64;
        let r = (2.0 * log_t / n).sqrt();
        let mean = h.rewards.iter().map(|&x| f64::from(x)).sum::<f64>() / n;
        assert!((bundle.g_ucb[a] - (mean + r).min(1.0)).abs() < 1e-12);
        for j in 0..cfg.resources() {
            let c = h.costs.iter().map(|c| c[j]).sum::<f64>() / n;
            assert!((bundle.c_lcb[a][j] - (c - r).max(0.0)).abs() < 1e-12);
        }
    }
    let mut policy = SwUcb::new(&cfg, sw);
    let plan = policy.plan(&obs).unwrap();
    let direct = lp::solve(&LpInstance {
        objective: bundle.g_ucb.clone(),
        costs: bundle.c_lcb.clone(),
        rate: cfg.rate(),
    })
    .unwrap();
    assert_eq!(plan.pi, direct);
}

/// Expected total reward of `kind` from the current node, enumerating every
/// arm choice and reward outcome with its exact probability. Costs are
/// deterministic.
fn exact_expectation(
    cfg: &EpisodeConfig,
    kind: PolicyKind,
    settings: &PolicySettings,
    obs: &Observed,
    x: &[f64],
    spent: &[f64],
) -> f64 {
    if obs.round() == cfg.horizon {
        return 0.0;
    }
    let plan = policy::build(kind, cfg, settings).unwrap().plan(obs).unwrap();
    let next_x = |choice: Option<usize>| -> Vec<f64> {
        cfg.arms
            .iter()
            .enumerate()
            .map(|(i, arm)| arm.transition(x[i], choice == Some(i)).unwrap())
            .collect()
    };
    let mut value = 0.0;
    for (a, &p) in plan.pi.pi.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let cost = cfg.arms[a].cost_low.clone();
        let new_spent: Vec<f64> = spent.iter().zip(&cost).map(|(s, c)| s + c).collect();
        if new_spent.iter().any(|&s| s > cfg.budget) {
            continue;
        }
        let g = cfg.arms[a].expected_reward(x[a]);
        let nx = next_x(Some(a));
        for (reward, pr) in [(1u8, g), (0u8, 1.0 - g)] {
            let mut next = obs.clone();
            next.record(&StepOutcome {
                arm: Some(a),
                reward,
                cost: cost.clone(),
            })
            .unwrap();
            value += p * pr * (f64::from(reward) + exact_expectation(cfg, kind, settings, &next, &nx, &new_spent));
        }
    }
    if plan.pi.null_mass > 0.0 {
        let mut next = obs.clone();
        next.record(&StepOutcome {
            arm: None,
            reward: 0,
            cost: vec![0.0; cfg.resources()],
        })
        .unwrap();
        value += plan.pi.null_mass * exact_expectation(cfg, kind, settings, &next, &next_x(None), spent);
    }
    value
}

#[test]
fn oracle_dominates_every_policy_in_expectation() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    let mut checked = 0;
    while checked < 12 {
        let cfg = random_tiny_instance(&mut rng);
        if cfg.horizon > 4 || cfg.arm_count() > 2 {
            continue;
        }
        checked += 1;
        let oracle = exact_oracle(&cfg).unwrap().value;
        let settings = PolicySettings::for_config(&cfg);
        let kinds = KINDS
            .into_iter()
            .chain((0..cfg.arm_count()).map(PolicyKind::FixedArm));
        for kind in kinds {
            let v = exact_expectation(
                &cfg,
                kind,
                &settings,
                &Observed::new(cfg.arm_count()),
                &cfg.x0,
                &vec![0.0; cfg.resources()],
            );
            assert!(v <= oracle + 1e-9, "{kind}: {v} > oracle {oracle}");
        }
    }
}
