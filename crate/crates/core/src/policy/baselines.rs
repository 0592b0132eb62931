use rand::RngCore;

use super::{initial_pull, Observed, Plan, Policy, PolicyDecision, SwUcbConfig};
use crate::env::EpisodeConfig;
use crate::error::Result;
use crate::estimation::ConfidenceBundle;
use crate::lp::{self, LpInstance, LpSolution};

/// UCB1 on lifetime reward means; ignores costs and state dynamics.
/// Ties go to the lowest arm index.
pub struct NaiveUcb {
    arms: usize,
}

impl NaiveUcb {
    pub fn new(arms: usize) -> Self {
        NaiveUcb { arms }
    }
}

impl Policy for NaiveUcb {
    fn plan(&mut self, obs: &Observed) -> Result<Plan> {
        if let Some(a) = initial_pull(obs) {
            return Ok(Plan::point_mass(self.arms, a));
        }
        let log_t = (obs.round() as f64).ln();
        let index: Vec<f64> = obs
            .histories
            .iter()
            .map(|h| h.mean_reward() + (2.0 * log_t / h.n() as f64).sqrt())
            .collect();
        let mut best = 0;
        for (a, &v) in index.iter().enumerate() {
            if v > index[best] {
                best = a;
            }
        }
        Ok(Plan {
            pi: LpSolution::point_mass(self.arms, Some(best), Some(&index)),
            diagnostics: None,
            optimistic: Some(index),
        })
    }
}

pub fn naive_ucb_step(obs: &Observed, rng: &mut dyn RngCore) -> Result<PolicyDecision> {
    NaiveUcb::new(obs.histories.len()).decide(obs, rng)
}

/// Sliding-window UCB for knapsacks: reward UCBs and cost LCBs from the
/// observations of the last `window` rounds, fed to the allocation LP.
/// Arms unseen in the window get reward bound 1 and cost bound 0.
pub struct SwUcb<'a> {
    config: &'a EpisodeConfig,
    sw: SwUcbConfig,
}

impl<'a> SwUcb<'a> {
    pub fn new(config: &'a EpisodeConfig, sw: SwUcbConfig) -> Self {
        SwUcb { config, sw }
    }

    pub fn bundle(&self, obs: &Observed) -> ConfidenceBundle {
        let d = self.config.resources();
        let t = obs.round();
        let start = t.saturating_sub(self.sw.window);
        let log_horizon = (self.config.horizon as f64).ln();
        let mut g_ucb = Vec::with_capacity(obs.histories.len());
        let mut c_lcb = Vec::with_capacity(obs.histories.len());
        for h in &obs.histories {
            let first = h.pull_times.partition_point(|&p| p < start);
            let n = h.n() - first;
            if n == 0 {
                g_ucb.push(1.0);
                c_lcb.push(vec![0.0; d]);
                continue;
            }
            let nf = n as f64;
            let radius = (self.sw.radius_coeff * log_horizon / nf).sqrt();
            let mean_r = h.rewards[first..].iter().map(|&r| f64::from(r)).sum::<f64>() / nf;
            g_ucb.push((mean_r + radius).min(1.0));
            c_lcb.push(
                (0..d)
                    .map(|j| {
                        let mean_c = h.costs[first..].iter().map(|c| c[j]).sum::<f64>() / nf;
                        (mean_c - radius).max(0.0)
                    })
                    .collect(),
            );
        }
        ConfidenceBundle {
            g_ucb,
            c_lcb,
            x_hat0: Vec::new(),
        }
    }
}

impl Policy for SwUcb<'_> {
    fn plan(&mut self, obs: &Observed) -> Result<Plan> {
        if let Some(a) = initial_pull(obs) {
            return Ok(Plan::point_mass(self.config.arm_count(), a));
        }
        let bundle = self.bundle(obs);
        let inst = LpInstance {
            objective: bundle.g_ucb.clone(),
            costs: bundle.c_lcb.clone(),
            rate: self.config.rate(),
        };
        Ok(Plan {
            pi: lp::solve(&inst)?,
            optimistic: Some(bundle.g_ucb.clone()),
            diagnostics: Some(bundle),
        })
    }
}

pub fn sw_ucb_step(
    obs: &Observed,
    config: &EpisodeConfig,
    sw: &SwUcbConfig,
    rng: &mut dyn RngCore,
) -> Result<PolicyDecision> {
    SwUcb::new(config, *sw).decide(obs, rng)
}

/// Plays the same arm every round.
pub struct FixedArm {
    arms: usize,
    arm: usize,
}

impl FixedArm {
    pub fn new(arms: usize, arm: usize) -> Self {
        FixedArm { arms, arm }
    }
}

impl Policy for FixedArm {
    fn plan(&mut self, _obs: &Observed) -> Result<Plan> {
        Ok(Plan::point_mass(self.arms, self.arm))
    }
}
