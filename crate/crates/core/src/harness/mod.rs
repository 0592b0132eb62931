//! Episode runner, benchmark grid and regret-proxy curves.

mod bench;
mod instances;
mod regret;
mod stats;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::env::{BanditState, EpisodeConfig};
use crate::error::Result;
use crate::estimation::ConfidenceBundle;
use crate::policy::{self, Observed, PolicyKind, PolicySettings};
use crate::rng::{self, Stream};

pub use bench::{
    improvement, run_benchmark, run_benchmark_with, summarize, write_records, write_results,
    write_summary, BenchmarkOutcome, SummaryRow, THREADS_VAR,
};
pub use instances::{check_upper_bound, random_tiny_instance, OracleCheck};
pub use regret::{log_log_slope, regret_proxy_curve, RegretCurve, RegretPoint};
pub use stats::quantile;

/// Outcome of one episode. Rewards, plays and pulls count rounds before
/// the stopping round `tau` only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub policy: String,
    pub budget: f64,
    pub replicate: usize,
    pub seed: u64,
    pub cumulative_reward: f64,
    pub tau: usize,
    pub plays: usize,
    pub per_arm_pulls: Vec<usize>,
    pub avg_reward_per_play: f64,
}

/// One played round as seen from outside.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// 1-based round index.
    pub t: usize,
    pub arm: Option<usize>,
    pub reward: u8,
    pub cost: Vec<f64>,
    /// Hidden states at the start of the round.
    pub x_true: Vec<f64>,
    pub optimistic: Option<Vec<f64>>,
    pub null_mass: f64,
    pub bundle: Option<ConfidenceBundle>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Episode {
    pub record: RunRecord,
    pub trace: Vec<TraceRow>,
    pub final_state: BanditState,
}

pub fn run_episode(
    config: &EpisodeConfig,
    kind: PolicyKind,
    settings: &PolicySettings,
    seed: u64,
) -> Result<RunRecord> {
    run(config, kind, settings, seed, false).map(|e| e.record)
}

pub fn run_episode_traced(
    config: &EpisodeConfig,
    kind: PolicyKind,
    settings: &PolicySettings,
    seed: u64,
) -> Result<Episode> {
    run(config, kind, settings, seed, true)
}

fn run(
    config: &EpisodeConfig,
    kind: PolicyKind,
    settings: &PolicySettings,
    seed: u64,
    keep_trace: bool,
) -> Result<Episode> {
    let m = config.arm_count();
    let mut policy = policy::build(kind, config, settings)?;
    let mut policy_rng = rng::stream(seed, Stream::Policy);
    let mut state = BanditState::new(config);
    let mut obs = Observed::new(m);
    let mut trace = Vec::new();
    let mut cumulative = 0.0;
    let mut per_arm = vec![0usize; m];

    while !state.terminated {
        let decision = policy.decide(&obs, &mut policy_rng)?;
        let x_true = keep_trace.then(|| state.x.clone());
        let mut env_rng = rng::environment_round(seed, state.t);
        let outcome = state.step(config, decision.chosen, &mut env_rng)?;
        let before_stop = state.tau.is_none_or(|tau| state.t < tau);
        if before_stop {
            if let Some(a) = outcome.arm {
                cumulative += f64::from(outcome.reward);
                per_arm[a] += 1;
            }
        }
        obs.record(&outcome)?;
        if let Some(x_true) = x_true {
            trace.push(TraceRow {
                t: state.t,
                arm: outcome.arm,
                reward: outcome.reward,
                cost: outcome.cost,
                x_true,
                optimistic: decision.optimistic,
                null_mass: decision.pi.null_mass,
                bundle: decision.diagnostics,
            });
        }
    }

    let plays: usize = per_arm.iter().sum();
    let record = RunRecord {
        policy: kind.name(),
        budget: config.budget,
        replicate: 0,
        seed,
        cumulative_reward: cumulative,
        tau: state.tau.expect("terminated episodes have a stopping round"),
        plays,
        per_arm_pulls: per_arm,
        avg_reward_per_play: if plays > 0 { cumulative / plays as f64 } else { 0.0 },
    };
    Ok(Episode {
        record,
        trace,
        final_state: state,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Per-round CSV: `t,arm,reward,cost_1..d,x_true_0..,g_ucb_0..,null_mass`.
/// The null action is written as arm `-1`.
pub fn write_trace<W: Write>(out: W, trace: &[TraceRow], m: usize, d: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "arm".into(), "reward".into()];
    header.extend((1..=d).map(|j| format!("cost_{j}")));
    header.extend((0..m).map(|a| format!("x_true_{a}")));
    header.extend((0..m).map(|a| format!("g_ucb_{a}")));
    header.push("null_mass".into());
    w.write_record(&header)?;
    for row in trace {
        let mut rec = vec![
            row.t.to_string(),
            row.arm.map_or("-1".to_string(), |a| a.to_string()),
            row.reward.to_string(),
        ];
        rec.extend(row.cost.iter().map(f64::to_string));
        rec.extend(row.x_true.iter().map(f64::to_string));
        match &row.optimistic {
            Some(g) => rec.extend(g.iter().map(f64::to_string)),
            None => rec.extend(std::iter::repeat_n(String::new(), m)),
        }
        rec.push(row.null_mass.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Per-(round, arm) confidence bundle dump: `t,arm,g_ucb,c_lcb_1..d,x_hat0`.
pub fn write_bundles<W: Write>(out: W, trace: &[TraceRow], d: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string(), "arm".into(), "g_ucb".into()];
    header.extend((1..=d).map(|j| format!("c_lcb_{j}")));
    header.push("x_hat0".into());
    w.write_record(&header)?;
    for row in trace {
        let Some(b) = &row.bundle else { continue };
        for (a, g) in b.g_ucb.iter().enumerate() {
            let mut rec = vec![row.t.to_string(), a.to_string(), g.to_string()];
            rec.extend(b.c_lcb[a].iter().map(f64::to_string));
            rec.push(fmt_opt(b.x_hat0.get(a).copied()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}
