use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use super::stats::quantile;
use super::{run_episode, RunRecord};
use crate::error::{Error, Result};
use crate::policy::PolicyKind;
use crate::spec::BenchmarkSpec;

/// Environment variable that caps the worker thread count.
pub const THREADS_VAR: &str = "ROGUEWK_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub policy: String,
    pub budget: f64,
    pub median_reward: f64,
    pub q1: f64,
    pub q3: f64,
    pub median_tau: f64,
    pub median_plays: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkOutcome {
    /// Sorted by (policy name, budget, replicate).
    pub records: Vec<RunRecord>,
    pub summary: Vec<SummaryRow>,
    /// Mean over budgets of the relative gain of `roguewk_ucb` over `sw_ucb`
    /// medians; `None` unless both policies ran.
    pub improvement: Option<f64>,
}

fn run_cell(spec: &BenchmarkSpec, kind: PolicyKind, budget: f64, replicate: usize) -> Result<RunRecord> {
    let config = spec.base_config.with_budget(budget);
    let settings = spec.settings_for(&config);
    let seed = spec.seed + replicate as u64;
    let mut rec = run_episode(&config, kind, &settings, seed)?;
    rec.replicate = replicate;
    Ok(rec)
}

/// Runs every (policy, budget, replicate) cell. Replicate `r` uses seed
/// `spec.seed + r` for every policy and budget, so cells are independent of
/// scheduling and `parallel` only changes wall time.
pub fn run_benchmark_with(spec: &BenchmarkSpec, parallel: bool) -> Result<BenchmarkOutcome> {
    let cells: Vec<(PolicyKind, f64, usize)> = spec
        .policies
        .iter()
        .flat_map(|&k| {
            spec.budgets
                .iter()
                .flat_map(move |&b| (0..spec.replicates).map(move |r| (k, b, r)))
        })
        .collect();
    let mut records: Vec<RunRecord> = if parallel {
        let run = || {
            cells
                .par_iter()
                .map(|&(k, b, r)| run_cell(spec, k, b, r))
                .collect::<Result<Vec<_>>>()
        };
        match std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()) {
            Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
                .install(run)?,
            _ => run()?,
        }
    } else {
        cells
            .iter()
            .map(|&(k, b, r)| run_cell(spec, k, b, r))
            .collect::<Result<Vec<_>>>()?
    };
    records.sort_by(|a, b| {
        a.policy
            .cmp(&b.policy)
            .then(a.budget.total_cmp(&b.budget))
            .then(a.replicate.cmp(&b.replicate))
    });
    let summary = summarize(&records);
    let improvement = improvement(&summary);
    Ok(BenchmarkOutcome {
        records,
        summary,
        improvement,
    })
}

pub fn run_benchmark(spec: &BenchmarkSpec) -> Result<BenchmarkOutcome> {
    run_benchmark_with(spec, true)
}

/// Median and quartiles of cumulative reward per (policy, budget).
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, u64), Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        // Budgets are positive, so their bit patterns sort like the values.
        groups.entry((r.policy.clone(), r.budget.to_bits())).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|((policy, bits), rs)| {
            let rewards: Vec<f64> = rs.iter().map(|r| r.cumulative_reward).collect();
            let taus: Vec<f64> = rs.iter().map(|r| r.tau as f64).collect();
            let plays: Vec<f64> = rs.iter().map(|r| r.plays as f64).collect();
            SummaryRow {
                policy,
                budget: f64::from_bits(bits),
                median_reward: quantile(&rewards, 0.5),
                q1: quantile(&rewards, 0.25),
                q3: quantile(&rewards, 0.75),
                median_tau: quantile(&taus, 0.5),
                median_plays: quantile(&plays, 0.5),
            }
        })
        .collect()
}

/// Mean over budgets of `(median_rogue - median_sw) / median_sw`. Budgets
/// where the SW-UCB median is zero are skipped.
pub fn improvement(summary: &[SummaryRow]) -> Option<f64> {
    let medians = |name: &str| -> BTreeMap<u64, f64> {
        summary
            .iter()
            .filter(|s| s.policy == name)
            .map(|s| (s.budget.to_bits(), s.median_reward))
            .collect()
    };
    let rogue = medians(&PolicyKind::RoguewkUcb.name());
    let sw = medians(&PolicyKind::SwUcb.name());
    let gains: Vec<f64> = rogue
        .iter()
        .filter_map(|(b, r)| sw.get(b).filter(|s| **s != 0.0).map(|s| (r - s) / s))
        .collect();
    (!gains.is_empty()).then(|| gains.iter().sum::<f64>() / gains.len() as f64)
}

pub fn write_records<W: Write>(out: W, records: &[RunRecord], m: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["policy", "budget", "replicate", "seed", "cumulative_reward", "tau", "plays"]
        .map(String::from)
        .to_vec();
    header.extend((0..m).map(|a| format!("pulls_{a}")));
    header.push("avg_reward_per_play".into());
    w.write_record(&header)?;
    for r in records {
        let mut row = vec![
            r.policy.clone(),
            r.budget.to_string(),
            r.replicate.to_string(),
            r.seed.to_string(),
            r.cumulative_reward.to_string(),
            r.tau.to_string(),
            r.plays.to_string(),
        ];
        row.extend(r.per_arm_pulls.iter().map(usize::to_string));
        row.push(r.avg_reward_per_play.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_summary<W: Write>(out: W, summary: &[SummaryRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["policy", "budget", "median_reward", "q1", "q3", "median_tau", "median_plays"])?;
    for s in summary {
        w.write_record([
            s.policy.clone(),
            s.budget.to_string(),
            s.median_reward.to_string(),
            s.q1.to_string(),
            s.q3.to_string(),
            s.median_tau.to_string(),
            s.median_plays.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `results.csv`, `summary.csv` and `improvement.txt` into `dir`,
/// creating it if needed.
pub fn write_results(dir: &Path, outcome: &BenchmarkOutcome, m: usize) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_records(fs::File::create(dir.join("results.csv"))?, &outcome.records, m)?;
    write_summary(fs::File::create(dir.join("summary.csv"))?, &outcome.summary)?;
    let text = outcome.improvement.map_or("NA".to_string(), |v| v.to_string());
    fs::write(dir.join("improvement.txt"), format!("{text}\n"))?;
    Ok(())
}
