use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::env::{logistic, ArmModel, EpisodeConfig};
use crate::error::{Error, Result};

use super::mle::log_sigmoid;
use super::rollout::{ActionLog, ArmHistory, Evidence};

/// Bisection stops once the bracket is this narrow (relative).
const EDGE_TOL: f64 = 1e-13;

/// Constants of the reward confidence radius.
///
/// `radius_scale` multiplies the whole radius; at 1 the bound is the
/// theoretical one, which for realistic horizons covers the entire state
/// domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceConfig {
    pub l_f: f64,
    pub l_p: f64,
    pub l_g: f64,
    pub sigma: f64,
    pub d_x: usize,
    pub diam: f64,
    pub radius_scale: f64,
}

impl ConfidenceConfig {
    /// Constants derived from the arms of `config`:
    ///
    /// * `l_f`: the log-likelihood ratio of a Bernoulli with logit
    ///   `alpha + beta x` has `|d/dx| = |beta| |r - g(x)| <= |beta| max(g, 1 - g)`,
    ///   maximized over each arm's domain (at an endpoint, `g` being monotone).
    /// * `l_p`: viewed as a function of `r`, the same ratio has slope
    ///   `logit(g(x')) - logit(g(x)) = beta (x' - x)`, bounded by `|beta| width`.
    /// * `l_g = max |beta| / 4` and `sigma = 1/2` for Bernoulli rewards.
    pub fn for_config(config: &EpisodeConfig) -> Self {
        let mut l_f: f64 = 0.0;
        let mut l_p: f64 = 0.0;
        for arm in &config.arms {
            let dom = arm.state_domain;
            let edge = [dom.lo, dom.hi]
                .iter()
                .map(|&x| {
                    let g = arm.expected_reward(x);
                    g.max(1.0 - g)
                })
                .fold(0.0, f64::max);
            l_f = l_f.max(arm.link_beta.abs() * edge);
            l_p = l_p.max(arm.link_beta.abs() * dom.width());
        }
        ConfidenceConfig {
            l_f,
            l_p,
            l_g: config.reward_lipschitz(),
            sigma: 0.5,
            d_x: 1,
            diam: config.diameter(),
            radius_scale: 1.0,
        }
    }

    /// `c_f(d_x) = 8 L_f D sqrt(pi) + 48 sqrt(2) 2^(1/d_x) L_f D sqrt(pi d_x)`.
    pub fn c_f(&self) -> f64 {
        let d_x = self.d_x as f64;
        8.0 * self.l_f * self.diam * PI.sqrt()
            + 48.0 * SQRT_2 * 2f64.powf(1.0 / d_x) * self.l_f * self.diam * (PI * d_x).sqrt()
    }

    /// `B(alpha) = c_f / sqrt(log(1/alpha)) + L_p sigma sqrt(2)`.
    pub fn bias_factor(&self, alpha: f64) -> f64 {
        self.c_f() / (1.0 / alpha).ln().sqrt() + self.l_p * self.sigma * SQRT_2
    }
}

/// Radius on the average trajectory divergence after `n` pulls:
/// `xi B(alpha) sqrt(log(1/alpha) / n)` with `alpha = 1 / (6 m T^2)`.
pub fn confidence_radius(n: usize, m: usize, horizon: usize, cfg: &ConfidenceConfig) -> f64 {
    assert!(n >= 1, "confidence radius needs at least one pull");
    let t = horizon as f64;
    let alpha = 1.0 / (6.0 * m as f64 * t * t);
    let log_inv = (1.0 / alpha).ln();
    cfg.radius_scale * cfg.bias_factor(alpha) * (log_inv / n as f64).sqrt()
}

/// KL divergence between Bernoulli laws with logits `z_p` and `z_q`.
#[inline]
fn kl_logits(z_p: f64, z_q: f64) -> f64 {
    let p = logistic(z_p);
    let kl = p * (log_sigmoid(z_p) - log_sigmoid(z_q))
        + (1.0 - p) * (log_sigmoid(-z_p) - log_sigmoid(-z_q));
    kl.max(0.0)
}

/// `KL(Ber(p) || Ber(q))` for `p, q` in `(0, 1)`.
pub fn bernoulli_kl(p: f64, q: f64) -> f64 {
    let logit = |v: f64| (v / (1.0 - v)).ln();
    kl_logits(logit(p), logit(q))
}

impl Evidence {
    /// Sum over kept observations of `KL(P_{x_s(x0)} || P_{x_s(x0p)})`, both
    /// rollouts driven by the same inputs.
    pub fn divergence(&self, arm: &ArmModel, x0: f64, x0p: f64) -> f64 {
        self.observations
            .iter()
            .map(|o| kl_logits(arm.logit(o.state.at(x0)), arm.logit(o.state.at(x0p))))
            .sum()
    }

    /// Largest expected reward at the current round over initial states whose
    /// average divergence from `x_hat` is at most `radius`.
    ///
    /// The divergence grows monotonically on each side of `x_hat`, so the
    /// feasible set is an interval whose ends are found by bisection; the
    /// reward at the current round is monotone in `x0`, so its maximum sits
    /// at one of those ends.
    pub fn reward_ucb(&self, arm: &ArmModel, x_hat: f64, radius: f64) -> f64 {
        let reward_at = |x0: f64| arm.expected_reward(self.current.at(x0));
        let at_estimate = reward_at(x_hat);
        if radius <= 0.0 || self.n == 0 {
            return at_estimate;
        }
        let allowance = radius * self.n as f64;
        let dom = arm.state_domain;
        let upper = self.feasible_edge(arm, x_hat, dom.hi, allowance);
        let lower = self.feasible_edge(arm, x_hat, dom.lo, allowance);
        reward_at(upper).max(reward_at(lower)).max(at_estimate)
    }

    fn feasible_edge(&self, arm: &ArmModel, x_hat: f64, end: f64, allowance: f64) -> f64 {
        if self.divergence(arm, end, x_hat) <= allowance {
            return end;
        }
        let (mut inside, mut outside) = (x_hat, end);
        for _ in 0..200 {
            if (outside - inside).abs() <= EDGE_TOL * (1.0 + inside.abs()) {
                break;
            }
            let mid = 0.5 * (inside + outside);
            if self.divergence(arm, mid, x_hat) <= allowance {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        inside
    }
}

/// Trajectory KL divergence between initial states `x0` and `x0p` over the
/// rounds in which `log` pulls `arm`.
pub fn trajectory_kl(arm: &ArmModel, x0: f64, x0p: f64, log: &ActionLog) -> f64 {
    Evidence::pulls_from_log(arm, log).divergence(arm, x0, x0p)
}

/// Optimistic expected reward of `arm` at round `t` (0-based, `t <= log.len()`).
pub fn reward_ucb(
    arm: &ArmModel,
    history: &ArmHistory,
    log: &ActionLog,
    t: usize,
    radius: f64,
) -> Result<f64> {
    let evidence = Evidence::from_log(arm, history, log, t, true)?;
    let x_hat = evidence.mle(arm)?;
    Ok(evidence.reward_ucb(arm, x_hat, radius))
}

/// Empirical mean cost of resource `j` minus the Hoeffding radius
/// `sqrt(log(12 m d T^2) / (2 n))`. Not clamped: small `n` gives negative
/// values.
pub fn cost_lcb(history: &ArmHistory, j: usize, m: usize, d: usize, horizon: usize) -> Result<f64> {
    let n = history.n();
    if n == 0 {
        return Err(Error::InvalidConfig("cost LCB needs at least one pull".into()));
    }
    Ok(history.mean_cost(j) - hoeffding_radius(n, m, d, horizon))
}

pub(crate) fn hoeffding_radius(n: usize, m: usize, d: usize, horizon: usize) -> f64 {
    let t = horizon as f64;
    ((12.0 * m as f64 * d as f64 * t * t).ln() / (2.0 * n as f64)).sqrt()
}

/// Per-arm reward UCBs, cost LCBs and initial-state estimates at one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceBundle {
    pub g_ucb: Vec<f64>,
    pub c_lcb: Vec<Vec<f64>>,
    pub x_hat0: Vec<f64>,
}

impl ConfidenceBundle {
    /// Assembles the bundle from per-arm evidence and MLEs.
    pub(crate) fn assemble(
        config: &EpisodeConfig,
        cfg: &ConfidenceConfig,
        evidence: &[Evidence],
        x_hat0: Vec<f64>,
        histories: &[ArmHistory],
    ) -> Self {
        let m = config.arm_count();
        let d = config.resources();
        let horizon = config.horizon;
        let g_ucb = config
            .arms
            .iter()
            .zip(evidence)
            .zip(&x_hat0)
            .map(|((arm, ev), &x_hat)| {
                let radius = confidence_radius(ev.n, m, horizon, cfg);
                ev.reward_ucb(arm, x_hat, radius)
            })
            .collect();
        let c_lcb = histories
            .iter()
            .map(|h| {
                let r = hoeffding_radius(h.n(), m, d, horizon);
                (0..d).map(|j| h.mean_cost(j) - r).collect()
            })
            .collect();
        ConfidenceBundle {
            g_ucb,
            c_lcb,
            x_hat0,
        }
    }
}

/// Confidence bundle for round `t` from scratch. Every arm must have been
/// pulled at least once.
pub fn confidence_bundle(
    config: &EpisodeConfig,
    cfg: &ConfidenceConfig,
    histories: &[ArmHistory],
    log: &ActionLog,
    t: usize,
) -> Result<ConfidenceBundle> {
    let evidence = config
        .arms
        .iter()
        .zip(histories)
        .map(|(arm, h)| Evidence::from_log(arm, h, log, t, true))
        .collect::<Result<Vec<_>>>()?;
    let x_hat0 = config
        .arms
        .iter()
        .zip(&evidence)
        .map(|(arm, ev)| ev.mle(arm))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConfidenceBundle::assemble(config, cfg, &evidence, x_hat0, histories))
}
