//! Arm-selection policies and the exhaustive oracle.
//!
//! Every policy first plays each arm once (round robin), then produces a
//! distribution over arms plus the null action for the current round; the
//! chosen arm is sampled from it.

mod baselines;
mod oracle;
mod roguewk;

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::env::{EpisodeConfig, StepOutcome};
use crate::error::{Error, Result};
use crate::estimation::{ActionLog, ArmHistory, ConfidenceBundle, ConfidenceConfig};
use crate::lp::LpSolution;

pub use baselines::{naive_ucb_step, sw_ucb_step, FixedArm, NaiveUcb, SwUcb};
pub use oracle::{exact_oracle, lp_upper_bound, OracleResult};
pub use roguewk::{roguewk_ucb_step, RoguewkUcb};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyKind {
    RoguewkUcb,
    NaiveUcb,
    SwUcb,
    /// Always plays one arm; used as a linear-regret anchor.
    FixedArm(usize),
}

impl PolicyKind {
    pub fn name(&self) -> String {
        match self {
            PolicyKind::RoguewkUcb => "roguewk_ucb".into(),
            PolicyKind::NaiveUcb => "naive_ucb".into(),
            PolicyKind::SwUcb => "sw_ucb".into(),
            PolicyKind::FixedArm(a) => format!("fixed_arm_{a}"),
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roguewk_ucb" => Ok(PolicyKind::RoguewkUcb),
            "naive_ucb" => Ok(PolicyKind::NaiveUcb),
            "sw_ucb" => Ok(PolicyKind::SwUcb),
            other => other
                .strip_prefix("fixed_arm_")
                .and_then(|a| a.parse().ok())
                .map(PolicyKind::FixedArm)
                .ok_or_else(|| Error::UnknownPolicy(other.to_owned())),
        }
    }
}

impl Serialize for PolicyKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for PolicyKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Sliding-window UCB hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwUcbConfig {
    pub window: usize,
    pub radius_coeff: f64,
}

impl SwUcbConfig {
    /// Window `ceil(sqrt(T))`, radius `sqrt(2 log T / n)`.
    pub fn for_horizon(horizon: usize) -> Self {
        SwUcbConfig {
            window: (horizon as f64).sqrt().ceil() as usize,
            radius_coeff: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicySettings {
    pub confidence: ConfidenceConfig,
    pub sw: SwUcbConfig,
}

impl PolicySettings {
    pub fn for_config(config: &EpisodeConfig) -> Self {
        PolicySettings {
            confidence: ConfidenceConfig::for_config(config),
            sw: SwUcbConfig::for_horizon(config.horizon),
        }
    }
}

/// What a policy has seen so far: per-arm histories and the full action log.
/// `log.len()` is the index of the round about to be played.
#[derive(Debug, Clone, PartialEq)]
pub struct Observed {
    pub histories: Vec<ArmHistory>,
    pub log: ActionLog,
}

impl Observed {
    pub fn new(arms: usize) -> Self {
        Observed {
            histories: vec![ArmHistory::default(); arms],
            log: ActionLog::new(),
        }
    }

    pub fn round(&self) -> usize {
        self.log.len()
    }

    pub fn record(&mut self, outcome: &StepOutcome) -> Result<()> {
        let t = self.round();
        if let Some(a) = outcome.arm {
            self.histories[a].record(t, outcome.reward, outcome.cost.clone())?;
        }
        self.log.push(outcome.arm);
        Ok(())
    }
}

/// A policy's distribution for the current round plus diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub pi: LpSolution,
    pub diagnostics: Option<ConfidenceBundle>,
    /// Optimistic per-arm reward estimates behind the plan, for traces.
    pub optimistic: Option<Vec<f64>>,
}

impl Plan {
    fn point_mass(m: usize, arm: usize) -> Self {
        Plan {
            pi: LpSolution::point_mass(m, Some(arm), None),
            diagnostics: None,
            optimistic: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolicyDecision {
    pub pi: LpSolution,
    pub chosen: Option<usize>,
    pub diagnostics: Option<ConfidenceBundle>,
    pub optimistic: Option<Vec<f64>>,
}

pub trait Policy {
    /// Distribution over arms (remaining mass: null action) for round
    /// `obs.round()`.
    fn plan(&mut self, obs: &Observed) -> Result<Plan>;

    fn decide(&mut self, obs: &Observed, rng: &mut dyn rand::RngCore) -> Result<PolicyDecision> {
        let plan = self.plan(obs)?;
        let chosen = sample(&plan.pi, rng);
        Ok(PolicyDecision {
            pi: plan.pi,
            chosen,
            diagnostics: plan.diagnostics,
            optimistic: plan.optimistic,
        })
    }
}

/// Draws an arm with probability `pi[a]`, or `None` with the null mass.
/// Arms with zero mass are never returned.
pub fn sample<R: Rng + ?Sized>(pi: &LpSolution, rng: &mut R) -> Option<usize> {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = None;
    for (a, &p) in pi.pi.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(a);
        if u < acc {
            return Some(a);
        }
    }
    if pi.null_mass > 0.0 {
        None
    } else {
        last
    }
}

/// Round robin over arms during the first `m` rounds.
fn initial_pull(obs: &Observed) -> Option<usize> {
    let m = obs.histories.len();
    let t = obs.round();
    (t < m).then_some(t)
}

pub fn build<'a>(
    kind: PolicyKind,
    config: &'a EpisodeConfig,
    settings: &PolicySettings,
) -> Result<Box<dyn Policy + Send + 'a>> {
    Ok(match kind {
        PolicyKind::RoguewkUcb => Box::new(RoguewkUcb::new(config, settings.confidence)),
        PolicyKind::NaiveUcb => Box::new(NaiveUcb::new(config.arm_count())),
        PolicyKind::SwUcb => Box::new(SwUcb::new(config, settings.sw)),
        PolicyKind::FixedArm(a) => {
            if a >= config.arm_count() {
                return Err(Error::UnknownArm {
                    arm: a,
                    m: config.arm_count(),
                });
            }
            Box::new(FixedArm::new(config.arm_count(), a))
        }
    })
}
