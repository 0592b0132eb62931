//! Exhaustive search over action sequences for tiny deterministic-cost
//! instances, and the LP-based upper bound it is checked against.

use crate::env::EpisodeConfig;
use crate::error::{Error, Result};
use crate::lp::{self, LpInstance};

const MAX_HORIZON: usize = 12;
const MAX_ARMS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: f64,
    pub sequence: Vec<Option<usize>>,
}

struct Search<'a> {
    config: &'a EpisodeConfig,
    costs: Vec<Vec<f64>>,
    best: OracleResult,
    path: Vec<Option<usize>>,
}

impl Search<'_> {
    fn visit(&mut self, x: &[f64], spent: &[f64], value: f64) {
        if self.path.len() == self.config.horizon {
            if value > self.best.value {
                self.best = OracleResult {
                    value,
                    sequence: self.path.clone(),
                };
            }
            return;
        }
        let m = self.config.arm_count();
        let mut next_x = vec![0.0; m];
        let mut next_spent = vec![0.0; spent.len()];
        for choice in (0..m).map(Some).chain([None]) {
            let mut gain = 0.0;
            if let Some(a) = choice {
                let mut over = false;
                for ((ns, s), c) in next_spent.iter_mut().zip(spent).zip(&self.costs[a]) {
                    *ns = s + c;
                    over |= *ns > self.config.budget;
                }
                // Exceeding the budget ends the episode without reward;
                // resting instead is never worse.
                if over {
                    continue;
                }
                gain = self.config.arms[a].expected_reward(x[a]);
            } else {
                next_spent.copy_from_slice(spent);
            }
            for (i, arm) in self.config.arms.iter().enumerate() {
                next_x[i] = arm.advance(x[i], choice == Some(i));
            }
            self.path.push(choice);
            self.visit(&next_x, &next_spent, value + gain);
            self.path.pop();
        }
    }
}

/// Best total expected reward over all `(m + 1)^T` action sequences
/// (null action included) that never exceed the budget.
pub fn exact_oracle(config: &EpisodeConfig) -> Result<OracleResult> {
    let m = config.arm_count();
    if config.horizon > MAX_HORIZON || m > MAX_ARMS {
        return Err(Error::ScaleGuard(format!(
            "exact oracle supports T <= {MAX_HORIZON}, m <= {MAX_ARMS} (got T = {}, m = {m})",
            config.horizon
        )));
    }
    if !config.has_deterministic_costs() {
        return Err(Error::ScaleGuard("exact oracle needs deterministic costs".into()));
    }
    let mut search = Search {
        config,
        costs: config.arms.iter().map(|a| a.cost_low.clone()).collect(),
        best: OracleResult {
            value: f64::NEG_INFINITY,
            sequence: Vec::new(),
        },
        path: Vec::with_capacity(config.horizon),
    };
    search.visit(&config.x0, &vec![0.0; config.resources()], 0.0);
    Ok(search.best)
}

/// `T * LP(g(x0), C) + L_g diam(X) / (1 - L_h)` with true mean costs.
pub fn lp_upper_bound(config: &EpisodeConfig) -> Result<f64> {
    let inst = LpInstance {
        objective: config.initial_rewards(),
        costs: config.mean_costs(),
        rate: config.rate(),
    };
    let lp_value = lp::solve(&inst)?.value;
    Ok(config.horizon as f64 * lp_value
        + config.reward_lipschitz() * config.diameter() / (1.0 - config.contraction()))
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    fn config(arms: &str, x0: &str, t: usize, budget: f64) -> EpisodeConfig {
        EpisodeConfig::from_json(&format!(
            r#"{{"arms":[{arms}],"x0":[{x0}],"T":{t},"budget":{budget}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn single_round_single_arm() {
        let cfg = config(
            r#"{"A":0.5,"B":-1,"K":0.2,"alpha":0.1,"beta":1,"cost_low":[0.3],"cost_high":[0.3]}"#,
            "0.4",
            1,
            0.5,
        );
        let r = exact_oracle(&cfg).unwrap();
        assert_eq!(r.sequence, vec![Some(0)]);
        assert_relative_eq!(r.value, cfg.arms[0].expected_reward(0.4));
    }

    #[test]
    fn beats_every_fixed_arm_sequence() {
        let cfg = config(
            r#"{"A":0.3,"B":-3,"K":1.5,"alpha":0,"beta":1,"cost_low":[0.1],"cost_high":[0.1]},
               {"A":0.3,"B":0,"K":0.2,"alpha":0,"beta":1,"cost_low":[0.1],"cost_high":[0.1]}"#,
            "2.0, 0.3",
            2,
            5.0,
        );
        let r = exact_oracle(&cfg).unwrap();
        for a in 0..2 {
            let mut x = cfg.x0[a];
            let mut v = 0.0;
            for _ in 0..2 {
                v += cfg.arms[a].expected_reward(x);
                x = cfg.arms[a].advance(x, true);
            }
            assert!(r.value >= v - 1e-12);
        }
        // The habituating arm is worth playing once, not twice.
        assert_eq!(r.sequence.iter().filter(|c| **c == Some(0)).count(), 1);
    }

    #[test]
    fn respects_budget() {
        let cfg = config(
            r#"{"A":0.1,"B":0,"K":0.5,"alpha":0,"beta":1,"cost_low":[0.4],"cost_high":[0.4]}"#,
            "0.5",
            5,
            1.0,
        );
        let r = exact_oracle(&cfg).unwrap();
        assert_eq!(r.sequence.iter().flatten().count(), 2);
    }

    #[test]
    fn guards_scale_and_stochastic_costs() {
        let big = config(
            r#"{"A":0.1,"B":0,"K":0.5,"alpha":0,"beta":1,"cost_low":[0.4],"cost_high":[0.4]}"#,
            "0.5",
            13,
            1.0,
        );
        assert!(exact_oracle(&big).is_err());
        let noisy = config(
            r#"{"A":0.1,"B":0,"K":0.5,"alpha":0,"beta":1,"cost_low":[0.3],"cost_high":[0.4]}"#,
            "0.5",
            3,
            1.0,
        );
        assert!(exact_oracle(&noisy).is_err());
    }
}
