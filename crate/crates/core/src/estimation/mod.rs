//! Per-arm estimation: maximum-likelihood initial states, trajectory
//! divergence, optimistic reward bounds and pessimistic cost bounds.
//!
//! Arms are scalar and affine, so the state at any round is
//! `slope * x0 + offset` with coefficients fixed by the action log (see
//! [`AffineState`]). The Bernoulli log-likelihood is then concave in `x0`
//! and each divergence term grows monotonically as `x0` moves away from the
//! estimate, which is what the solvers below rely on.

mod bounds;
mod mle;
mod rollout;

pub use bounds::{
    bernoulli_kl, confidence_bundle, confidence_radius, cost_lcb, reward_ucb, trajectory_kl,
    ConfidenceBundle, ConfidenceConfig,
};
pub use mle::{golden_section_max, mle_initial_state};
pub use rollout::{ActionLog, AffineState, ArmHistory, Evidence, Observation};
