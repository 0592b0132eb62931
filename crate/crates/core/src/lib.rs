//! Bandits whose arms habituate when played and recover when rested,
//! under stochastic knapsack constraints.
//!
//! Each arm carries a hidden scalar state with known affine dynamics
//! `x' = A x + B pulled + K`; rewards are Bernoulli with a logistic link in
//! the state, and every pull consumes `d` resources drawn from bounded
//! distributions. The episode stops as soon as any resource exceeds its
//! budget.
//!
//! The crate provides:
//!
//! * [`env`]: the generative model and episode state machine.
//! * [`estimation`]: maximum-likelihood initial states, trajectory KL
//!   divergence, reward UCBs and cost LCBs.
//! * [`lp`]: the per-round allocation LP (dense two-phase simplex) and a
//!   vertex-enumeration reference solver.
//! * [`policy`]: the UCB/LCB allocation policy, naive UCB1, sliding-window
//!   UCB for knapsacks, and an exhaustive oracle for tiny instances.
//! * [`harness`]: seeded episodes, the budget-grid benchmark, summaries and
//!   regret-proxy curves, with CSV output.
//! * [`spec`]: the benchmark spec file format and dotted-path overrides.

pub mod env;
pub mod error;
pub mod estimation;
pub mod harness;
pub mod lp;
pub mod policy;
pub mod rng;
pub mod spec;

pub use env::{ArmModel, BanditState, EpisodeConfig, StepOutcome};
pub use error::{Error, Result};
pub use estimation::{ActionLog, ArmHistory, ConfidenceBundle, ConfidenceConfig};
pub use lp::{LpInstance, LpSolution};
pub use policy::{PolicyDecision, PolicyKind, PolicySettings, SwUcbConfig};
