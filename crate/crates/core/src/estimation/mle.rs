use crate::env::ArmModel;
use crate::error::{Error, Result};

use super::rollout::{ActionLog, ArmHistory, Evidence};

const GOLDEN_MAX_ITER: usize = 200;
const ARG_TOL: f64 = 1e-9;

/// `log(1 / (1 + exp(-z)))` without overflow.
#[inline]
pub(crate) fn log_sigmoid(z: f64) -> f64 {
    -((-z).max(0.0) + (-z.abs()).exp().ln_1p())
}

impl Evidence {
    /// Bernoulli log-likelihood of the kept observations for initial state `x0`.
    pub fn log_likelihood(&self, arm: &ArmModel, x0: f64) -> f64 {
        self.observations
            .iter()
            .map(|o| {
                let z = arm.logit(o.state.at(x0));
                if o.reward == 1 {
                    log_sigmoid(z)
                } else {
                    log_sigmoid(-z)
                }
            })
            .sum()
    }

    /// Maximizer of the log-likelihood over the arm's state domain.
    pub fn mle(&self, arm: &ArmModel) -> Result<f64> {
        if self.n == 0 {
            return Err(Error::EmptyHistory { arm: arm.id });
        }
        let dom = arm.state_domain;
        let (x, _) = golden_section_max(|x| self.log_likelihood(arm, x), dom.lo, dom.hi, ARG_TOL, GOLDEN_MAX_ITER);
        Ok(x)
    }
}

/// Golden-section search for the maximum of a unimodal function on
/// `[lo, hi]`. The endpoints are compared with the interior result at the
/// end so that maxima on the boundary are returned exactly.
pub fn golden_section_max<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if b - a <= tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    let mut best = (mid, f(mid));
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

/// MLE of the arm's initial state from its rewards, rolling candidate
/// states forward under the logged pull indicators.
pub fn mle_initial_state(arm: &ArmModel, history: &ArmHistory, log: &ActionLog) -> Result<f64> {
    if history.n() == 0 {
        return Err(Error::EmptyHistory { arm: arm.id });
    }
    Evidence::from_log(arm, history, log, log.len(), true)?.mle(arm)
}
