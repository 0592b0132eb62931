use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("state {x} outside the state domain [{lo}, {hi}] of arm {arm}")]
    DomainViolation { arm: usize, x: f64, lo: f64, hi: f64 },

    #[error("episode already terminated at round {tau}")]
    Terminated { tau: usize },

    #[error("arm index {arm} out of range for {m} arms")]
    UnknownArm { arm: usize, m: usize },

    #[error("arm {arm} has no observations")]
    EmptyHistory { arm: usize },

    #[error("pull times must be strictly increasing (got {got} after {last})")]
    UnorderedPull { last: usize, got: usize },

    #[error("invalid LP instance: {0}")]
    InvalidLp(String),

    #[error("LP is infeasible")]
    Infeasible,

    #[error("LP is unbounded")]
    Unbounded,

    #[error("instance too large for exhaustive search: {0}")]
    ScaleGuard(String),

    #[error("unknown policy `{0}` (expected roguewk_ucb, naive_ucb or sw_ucb)")]
    UnknownPolicy(String),

    #[error("override `{0}`: {1}")]
    Override(String, String),

    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
