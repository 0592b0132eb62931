use serde::{Deserialize, Serialize};

use crate::env::ArmModel;
use crate::error::{Error, Result};

/// Below this sensitivity of the logit to the initial state (over the whole
/// state domain) an observation is constant in `x0` at `f64` resolution.
const NEGLIGIBLE_SENSITIVITY: f64 = 1e-18;

/// Per-round record of which arm was played (`None` for the null action).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionLog {
    choices: Vec<Option<usize>>,
}

impl ActionLog {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, choice: Option<usize>) {
        self.choices.push(choice);
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    pub fn choices(&self) -> &[Option<usize>] {
        &self.choices
    }

    /// Pull indicators `1[a_s = arm]` for every logged round.
    pub fn indicators(&self, arm: usize) -> impl Iterator<Item = bool> + '_ {
        self.choices.iter().map(move |c| *c == Some(arm))
    }

    pub fn pull_times(&self, arm: usize) -> Vec<usize> {
        self.indicators(arm)
            .enumerate()
            .filter_map(|(s, pulled)| pulled.then_some(s))
            .collect()
    }
}

impl FromIterator<Option<usize>> for ActionLog {
    fn from_iter<I: IntoIterator<Item = Option<usize>>>(iter: I) -> Self {
        ActionLog {
            choices: iter.into_iter().collect(),
        }
    }
}

/// Pull times, 0/1 rewards and cost vectors of one arm.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmHistory {
    pub pull_times: Vec<usize>,
    pub rewards: Vec<u8>,
    pub costs: Vec<Vec<f64>>,
}

impl ArmHistory {
    pub fn n(&self) -> usize {
        self.pull_times.len()
    }

    pub fn record(&mut self, t: usize, reward: u8, cost: Vec<f64>) -> Result<()> {
        if let Some(&last) = self.pull_times.last() {
            if t <= last {
                return Err(Error::UnorderedPull { last, got: t });
            }
        }
        self.pull_times.push(t);
        self.rewards.push(reward);
        self.costs.push(cost);
        Ok(())
    }

    pub fn mean_cost(&self, j: usize) -> f64 {
        self.costs.iter().map(|c| c[j]).sum::<f64>() / self.n() as f64
    }

    pub fn mean_reward(&self) -> f64 {
        self.rewards.iter().map(|&r| f64::from(r)).sum::<f64>() / self.n() as f64
    }
}

/// The state at some round as an affine function of the initial state:
/// `x_s = slope * x0 + offset`. Known dynamics make every rollout affine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineState {
    pub slope: f64,
    pub offset: f64,
}

impl AffineState {
    pub const ORIGIN: AffineState = AffineState {
        slope: 1.0,
        offset: 0.0,
    };

    #[inline]
    pub fn at(&self, x0: f64) -> f64 {
        self.slope * x0 + self.offset
    }

    fn advance(&self, arm: &ArmModel, pulled: bool) -> AffineState {
        let push = if pulled { arm.dyn_b } else { 0.0 };
        AffineState {
            slope: arm.dyn_a * self.slope,
            offset: arm.dyn_a * self.offset + push + arm.dyn_k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub state: AffineState,
    pub reward: u8,
}

/// Everything the estimators need about one arm after `t` rounds: the
/// affine rollout at each pull time with its reward, the pull count and the
/// rollout at the current round.
///
/// A pruned evidence set drops observations whose state no longer depends on
/// the initial state (contraction forgets `x0` geometrically). They change
/// the log-likelihood only by a constant and add nothing to the trajectory
/// divergence, but they still count towards `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Evidence {
    pub observations: Vec<Observation>,
    pub n: usize,
    pub current: AffineState,
    pub rounds: usize,
    prune: bool,
}

impl Evidence {
    pub fn new(prune: bool) -> Self {
        Evidence {
            observations: Vec::new(),
            n: 0,
            current: AffineState::ORIGIN,
            rounds: 0,
            prune,
        }
    }

    /// Appends one round: `reward` is `Some` when this arm was pulled.
    pub fn record_round(&mut self, arm: &ArmModel, reward: Option<u8>) {
        if let Some(r) = reward {
            self.n += 1;
            let informative = (arm.link_beta * self.current.slope).abs()
                * arm.state_domain.width()
                > NEGLIGIBLE_SENSITIVITY;
            if informative || !self.prune {
                self.observations.push(Observation {
                    state: self.current,
                    reward: r,
                });
            }
        }
        self.current = self.current.advance(arm, reward.is_some());
        self.rounds += 1;
    }

    /// Rebuilds the evidence of `arm` from the first `t` rounds of `log`.
    pub fn from_log(
        arm: &ArmModel,
        history: &ArmHistory,
        log: &ActionLog,
        t: usize,
        prune: bool,
    ) -> Result<Self> {
        let mut ev = Evidence::new(prune);
        let mut next = 0;
        for (s, pulled) in log.indicators(arm.id).take(t).enumerate() {
            let reward = if pulled {
                if history.pull_times.get(next) != Some(&s) {
                    return Err(Error::InvalidConfig(format!(
                        "history of arm {} disagrees with the action log at round {s}",
                        arm.id
                    )));
                }
                next += 1;
                Some(history.rewards[next - 1])
            } else {
                None
            };
            ev.record_round(arm, reward);
        }
        // Rounds past the end of the log are treated as rests.
        for _ in log.len()..t {
            ev.record_round(arm, None);
        }
        Ok(ev)
    }

    /// Observation rollouts only, for divergence between two initial states.
    pub fn pulls_from_log(arm: &ArmModel, log: &ActionLog) -> Self {
        let mut ev = Evidence::new(false);
        for pulled in log.indicators(arm.id) {
            ev.record_round(arm, pulled.then_some(0));
        }
        ev
    }
}
