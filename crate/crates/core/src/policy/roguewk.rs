use rand::RngCore;

use super::{initial_pull, Observed, Plan, Policy, PolicyDecision};
use crate::env::EpisodeConfig;
use crate::error::Result;
use crate::estimation::{ConfidenceBundle, ConfidenceConfig, Evidence};
use crate::lp::{self, LpInstance};

/// The UCB/LCB allocation policy.
///
/// Each round it re-estimates every arm's initial state by maximum
/// likelihood, takes the most optimistic current reward compatible with the
/// trajectory-divergence confidence set, subtracts a Hoeffding radius from
/// the empirical costs, and samples from the solution of the allocation LP.
///
/// Evidence is updated incrementally; MLEs are recomputed only when an arm
/// gains an observation that still depends on its initial state.
pub struct RoguewkUcb<'a> {
    config: &'a EpisodeConfig,
    confidence: ConfidenceConfig,
    evidence: Vec<Evidence>,
    synced: usize,
    mle_cache: Vec<Option<(usize, f64)>>,
}

impl<'a> RoguewkUcb<'a> {
    pub fn new(config: &'a EpisodeConfig, confidence: ConfidenceConfig) -> Self {
        let m = config.arm_count();
        RoguewkUcb {
            config,
            confidence,
            evidence: vec![Evidence::new(true); m],
            synced: 0,
            mle_cache: vec![None; m],
        }
    }

    fn sync(&mut self, obs: &Observed) {
        for s in self.synced..obs.round() {
            let choice = obs.log.choices()[s];
            for (a, (arm, ev)) in self.config.arms.iter().zip(&mut self.evidence).enumerate() {
                let reward = (choice == Some(a)).then(|| obs.histories[a].rewards[ev.n]);
                ev.record_round(arm, reward);
            }
        }
        self.synced = obs.round();
    }

    /// Confidence bundle for the round about to be played.
    pub fn bundle(&mut self, obs: &Observed) -> Result<ConfidenceBundle> {
        self.sync(obs);
        let mut x_hat = Vec::with_capacity(self.evidence.len());
        for ((arm, ev), cache) in self.config.arms.iter().zip(&self.evidence).zip(&mut self.mle_cache) {
            let kept = ev.observations.len();
            let x = match *cache {
                Some((k, x)) if k == kept => x,
                _ => {
                    let x = ev.mle(arm)?;
                    *cache = Some((kept, x));
                    x
                }
            };
            x_hat.push(x);
        }
        Ok(ConfidenceBundle::assemble(
            self.config,
            &self.confidence,
            &self.evidence,
            x_hat,
            &obs.histories,
        ))
    }
}

impl Policy for RoguewkUcb<'_> {
    fn plan(&mut self, obs: &Observed) -> Result<Plan> {
        let m = self.config.arm_count();
        if let Some(a) = initial_pull(obs) {
            return Ok(Plan::point_mass(m, a));
        }
        let bundle = self.bundle(obs)?;
        let inst = LpInstance {
            objective: bundle.g_ucb.clone(),
            costs: bundle.c_lcb.clone(),
            rate: self.config.rate(),
        };
        let pi = lp::solve(&inst)?;
        Ok(Plan {
            pi,
            optimistic: Some(bundle.g_ucb.clone()),
            diagnostics: Some(bundle),
        })
    }
}

/// One decision of the UCB/LCB policy from scratch.
pub fn roguewk_ucb_step(
    obs: &Observed,
    config: &EpisodeConfig,
    confidence: &ConfidenceConfig,
    rng: &mut dyn RngCore,
) -> Result<PolicyDecision> {
    RoguewkUcb::new(config, *confidence).decide(obs, rng)
}
