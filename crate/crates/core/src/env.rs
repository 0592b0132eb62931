//! The generative model: arms with affine state dynamics, logistic
//! Bernoulli rewards and bounded uniform resource costs, plus the episode
//! state machine with budget-based stopping.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative slack used when checking that a state lies inside its domain.
const DOMAIN_TOL: f64 = 1e-9;

/// Fraction of the hull width added on each side of a state domain.
const DOMAIN_INFLATION: f64 = 0.01;

/// Closed interval of admissible scalar states for one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateDomain {
    pub lo: f64,
    pub hi: f64,
}

impl StateDomain {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        let slack = DOMAIN_TOL * (1.0 + x.abs());
        x >= self.lo - slack && x <= self.hi + slack
    }

    /// Smallest interval holding `x0` and both affine fixed points that is
    /// mapped into itself by the pull and no-pull maps, widened by 1% of
    /// its width on each side.
    ///
    /// For `A >= 0` this is just the hull of the three points. A negative
    /// `A` makes the maps overshoot their fixed points, so the hull is grown
    /// until it is invariant.
    fn for_dynamics(a: f64, b: f64, k: f64, x0: f64) -> Self {
        let fixed_rest = k / (1.0 - a);
        let fixed_pull = (k + b) / (1.0 - a);
        let mut lo = x0.min(fixed_rest).min(fixed_pull);
        let mut hi = x0.max(fixed_rest).max(fixed_pull);
        for _ in 0..10_000 {
            let images = [a * lo + k, a * hi + k, a * lo + b + k, a * hi + b + k];
            let new_lo = images.iter().copied().fold(lo, f64::min);
            let new_hi = images.iter().copied().fold(hi, f64::max);
            if new_lo == lo && new_hi == hi {
                break;
            }
            lo = new_lo;
            hi = new_hi;
        }
        let pad = DOMAIN_INFLATION * (hi - lo);
        StateDomain {
            lo: lo - pad,
            hi: hi + pad,
        }
    }
}

/// One arm's dynamics `x' = A x + B pulled + K`, reward link
/// `g(x) = 1 / (1 + exp(-alpha - beta x))` and uniform cost supports.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmModel {
    pub id: usize,
    pub dyn_a: f64,
    pub dyn_b: f64,
    pub dyn_k: f64,
    pub link_alpha: f64,
    pub link_beta: f64,
    pub cost_low: Vec<f64>,
    pub cost_high: Vec<f64>,
    pub state_domain: StateDomain,
}

impl ArmModel {
    /// Builds an arm and derives its state domain from `x0`.
    pub fn new(id: usize, params: &ArmParams, x0: f64) -> Result<Self> {
        params.validate(id)?;
        if !x0.is_finite() {
            return Err(Error::InvalidConfig(format!("arm {id}: x0 must be finite")));
        }
        Ok(ArmModel {
            id,
            dyn_a: params.a,
            dyn_b: params.b,
            dyn_k: params.k,
            link_alpha: params.alpha,
            link_beta: params.beta,
            cost_low: params.cost_low.clone(),
            cost_high: params.cost_high.clone(),
            state_domain: StateDomain::for_dynamics(params.a, params.b, params.k, x0),
        })
    }

    pub fn params(&self) -> ArmParams {
        ArmParams {
            a: self.dyn_a,
            b: self.dyn_b,
            k: self.dyn_k,
            alpha: self.link_alpha,
            beta: self.link_beta,
            cost_low: self.cost_low.clone(),
            cost_high: self.cost_high.clone(),
        }
    }

    pub fn resources(&self) -> usize {
        self.cost_low.len()
    }

    pub fn transition(&self, x: f64, pulled: bool) -> Result<f64> {
        self.check_domain(x)?;
        Ok(self.advance(x, pulled))
    }

    #[inline]
    pub(crate) fn advance(&self, x: f64, pulled: bool) -> f64 {
        let push = if pulled { self.dyn_b } else { 0.0 };
        self.dyn_a * x + push + self.dyn_k
    }

    pub fn check_domain(&self, x: f64) -> Result<()> {
        if self.state_domain.contains(x) {
            Ok(())
        } else {
            Err(Error::DomainViolation {
                arm: self.id,
                x,
                lo: self.state_domain.lo,
                hi: self.state_domain.hi,
            })
        }
    }

    /// Logit of the expected reward at state `x`.
    #[inline]
    pub fn logit(&self, x: f64) -> f64 {
        self.link_alpha + self.link_beta * x
    }

    #[inline]
    pub fn expected_reward(&self, x: f64) -> f64 {
        logistic(self.logit(x))
    }

    pub fn rest_fixed_point(&self) -> f64 {
        self.dyn_k / (1.0 - self.dyn_a)
    }

    pub fn pull_fixed_point(&self) -> f64 {
        (self.dyn_k + self.dyn_b) / (1.0 - self.dyn_a)
    }

    pub fn mean_cost(&self) -> Vec<f64> {
        self.cost_low
            .iter()
            .zip(&self.cost_high)
            .map(|(lo, hi)| 0.5 * (lo + hi))
            .collect()
    }

    pub fn has_deterministic_cost(&self) -> bool {
        self.cost_low == self.cost_high
    }

    /// One uniform draw per resource from `rng`.
    pub fn sample_cost<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.cost_low
            .iter()
            .zip(&self.cost_high)
            .map(|(&lo, &hi)| {
                let u: f64 = rng.random();
                lo + (hi - lo) * u
            })
            .collect()
    }
}

#[inline]
pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Serialized form of one arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArmParams {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub cost_low: Vec<f64>,
    pub cost_high: Vec<f64>,
}

impl ArmParams {
    fn validate(&self, id: usize) -> Result<()> {
        let scalars = [self.a, self.b, self.k, self.alpha, self.beta];
        if scalars.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("arm {id}: parameters must be finite")));
        }
        if self.a.abs() >= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "arm {id}: |A| = {} violates the contraction assumption (|A| < 1)",
                self.a.abs()
            )));
        }
        if self.cost_low.is_empty() || self.cost_low.len() != self.cost_high.len() {
            return Err(Error::InvalidConfig(format!(
                "arm {id}: cost_low and cost_high must be non-empty and of equal length"
            )));
        }
        for (j, (&lo, &hi)) in self.cost_low.iter().zip(&self.cost_high).enumerate() {
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::InvalidConfig(format!(
                    "arm {id}: cost support [{lo}, {hi}] of resource {j} must satisfy 0 <= low <= high <= 1"
                )));
            }
        }
        Ok(())
    }
}

/// JSON document for one episode. Key names are part of the file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub arms: Vec<ArmParams>,
    pub x0: Vec<f64>,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub budget: f64,
    #[serde(default)]
    pub seed: u64,
}

/// A validated episode: arms, initial states, horizon `T`, budget `B` shared
/// by all `d` resources, and the episode seed.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeConfig {
    pub arms: Vec<ArmModel>,
    pub x0: Vec<f64>,
    pub horizon: usize,
    pub budget: f64,
    pub seed: u64,
}

impl EpisodeConfig {
    pub fn from_file(file: &ConfigFile) -> Result<Self> {
        if file.arms.is_empty() {
            return Err(Error::InvalidConfig("at least one arm is required".into()));
        }
        if file.x0.len() != file.arms.len() {
            return Err(Error::InvalidConfig(format!(
                "x0 has {} entries for {} arms",
                file.x0.len(),
                file.arms.len()
            )));
        }
        if file.horizon == 0 {
            return Err(Error::InvalidConfig("T must be at least 1".into()));
        }
        if !(file.budget.is_finite() && file.budget > 0.0) {
            return Err(Error::InvalidConfig("budget must be positive and finite".into()));
        }
        let arms = file
            .arms
            .iter()
            .zip(&file.x0)
            .enumerate()
            .map(|(id, (p, &x0))| ArmModel::new(id, p, x0))
            .collect::<Result<Vec<_>>>()?;
        let d = arms[0].resources();
        if arms.iter().any(|a| a.resources() != d) {
            return Err(Error::InvalidConfig("all arms must have the same number of resources".into()));
        }
        Ok(EpisodeConfig {
            arms,
            x0: file.x0.clone(),
            horizon: file.horizon,
            budget: file.budget,
            seed: file.seed,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: ConfigFile = serde_json::from_str(&text).map_err(|source| Error::Parse {
            path: path.to_owned(),
            source,
        })?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            arms: self.arms.iter().map(ArmModel::params).collect(),
            x0: self.x0.clone(),
            horizon: self.horizon,
            budget: self.budget,
            seed: self.seed,
        }
    }

    /// Copy with a different budget; the state domains do not depend on it.
    pub fn with_budget(&self, budget: f64) -> Self {
        EpisodeConfig {
            budget,
            ..self.clone()
        }
    }

    /// Copy with horizon `horizon` and budget `rate * horizon`.
    pub fn with_horizon(&self, horizon: usize, rate: f64) -> Self {
        EpisodeConfig {
            horizon,
            budget: rate * horizon as f64,
            ..self.clone()
        }
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    pub fn resources(&self) -> usize {
        self.arms[0].resources()
    }

    /// Per-round budget rate `b = B / T`.
    pub fn rate(&self) -> f64 {
        self.budget / self.horizon as f64
    }

    /// Contraction modulus `L_h = max |A|`.
    pub fn contraction(&self) -> f64 {
        self.arms.iter().map(|a| a.dyn_a.abs()).fold(0.0, f64::max)
    }

    /// `diam(X)`, taken as the widest per-arm state domain.
    pub fn diameter(&self) -> f64 {
        self.arms.iter().map(|a| a.state_domain.width()).fold(0.0, f64::max)
    }

    /// Lipschitz constant of the reward links, `max |beta| / 4`.
    pub fn reward_lipschitz(&self) -> f64 {
        self.arms.iter().map(|a| a.link_beta.abs()).fold(0.0, f64::max) / 4.0
    }

    /// Expected rewards at the initial states.
    pub fn initial_rewards(&self) -> Vec<f64> {
        self.arms
            .iter()
            .zip(&self.x0)
            .map(|(arm, &x)| arm.expected_reward(x))
            .collect()
    }

    pub fn mean_costs(&self) -> Vec<Vec<f64>> {
        self.arms.iter().map(ArmModel::mean_cost).collect()
    }

    pub fn has_deterministic_costs(&self) -> bool {
        self.arms.iter().all(ArmModel::has_deterministic_cost)
    }
}

/// Observable result of one round.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub arm: Option<usize>,
    pub reward: u8,
    pub cost: Vec<f64>,
}

/// Mutable episode state: `t` rounds have been played, `x` holds the hidden
/// arm states for round `t + 1`, and `tau` is the 1-based stopping round
/// (`T + 1` when the budget survives the horizon).
#[derive(Debug, Clone, PartialEq)]
pub struct BanditState {
    pub t: usize,
    pub x: Vec<f64>,
    pub spent: Vec<f64>,
    pub terminated: bool,
    pub tau: Option<usize>,
}

impl BanditState {
    pub fn new(config: &EpisodeConfig) -> Self {
        BanditState {
            t: 0,
            x: config.x0.clone(),
            spent: vec![0.0; config.resources()],
            terminated: false,
            tau: None,
        }
    }

    /// Plays one round.
    ///
    /// The reward uses the first uniform drawn from `rng` and the costs the
    /// next `d`; nothing is drawn for the null action. Every arm moves, the
    /// pulled one with indicator 1 and all others with indicator 0.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        config: &EpisodeConfig,
        choice: Option<usize>,
        rng: &mut R,
    ) -> Result<StepOutcome> {
        if self.terminated {
            return Err(Error::Terminated {
                tau: self.tau.unwrap_or(self.t),
            });
        }
        let m = config.arm_count();
        let outcome = match choice {
            Some(arm) if arm >= m => return Err(Error::UnknownArm { arm, m }),
            Some(arm) => {
                let model = &config.arms[arm];
                let p = model.expected_reward(self.x[arm]);
                let u: f64 = rng.random();
                let reward = u8::from(u < p);
                let cost = model.sample_cost(rng);
                StepOutcome {
                    arm: Some(arm),
                    reward,
                    cost,
                }
            }
            None => StepOutcome {
                arm: None,
                reward: 0,
                cost: vec![0.0; config.resources()],
            },
        };

        for (a, model) in config.arms.iter().enumerate() {
            self.x[a] = model.transition(self.x[a], choice == Some(a))?;
        }
        for (s, c) in self.spent.iter_mut().zip(&outcome.cost) {
            *s += c;
        }
        self.t += 1;
        if self.spent.iter().any(|&s| s > config.budget) {
            self.terminated = true;
            self.tau = Some(self.t);
        } else if self.t >= config.horizon {
            self.terminated = true;
            self.tau = Some(config.horizon + 1);
        }
        Ok(outcome)
    }
}

/// The three-arm, three-resource instance used in the simulation study.
pub const THREE_ARM_CONFIG: &str = include_str!("../configs/three_arm.json");

pub fn three_arm_config() -> EpisodeConfig {
    EpisodeConfig::from_json(THREE_ARM_CONFIG).expect("shipped config is valid")
}
