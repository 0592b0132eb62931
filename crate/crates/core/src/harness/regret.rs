use rayon::prelude::*;

use super::run_episode;
use crate::env::EpisodeConfig;
use crate::error::Result;
use crate::policy::{lp_upper_bound, PolicyKind, PolicySettings};

#[derive(Debug, Clone, PartialEq)]
pub struct RegretPoint {
    pub horizon: usize,
    /// `T LP(g0, C) + L_g diam / (1 - L_h)` with the true parameters.
    pub bound: f64,
    pub mean_reward: f64,
    /// `bound - mean_reward`.
    pub proxy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegretCurve {
    pub policy: String,
    pub points: Vec<RegretPoint>,
    /// Least-squares slope of `ln proxy` against `ln T`.
    pub slope: f64,
}

/// Proxy regret of `kind` on `template` rescaled to each horizon with budget
/// `rate * T`, averaged over `replicates` seeds starting at `seed`.
/// `settings` supplies the policy hyperparameters for each rescaled config.
pub fn regret_proxy_curve<F>(
    kind: PolicyKind,
    template: &EpisodeConfig,
    rate: f64,
    horizons: &[usize],
    replicates: usize,
    seed: u64,
    settings: F,
) -> Result<RegretCurve>
where
    F: Fn(&EpisodeConfig) -> PolicySettings + Sync,
{
    let points = horizons
        .iter()
        .map(|&horizon| {
            let config = template.with_horizon(horizon, rate);
            let s = settings(&config);
            let rewards = (0..replicates)
                .into_par_iter()
                .map(|r| run_episode(&config, kind, &s, seed + r as u64).map(|rec| rec.cumulative_reward))
                .collect::<Result<Vec<_>>>()?;
            let mean_reward = rewards.iter().sum::<f64>() / replicates.max(1) as f64;
            let bound = lp_upper_bound(&config)?;
            Ok(RegretPoint {
                horizon,
                bound,
                mean_reward,
                proxy: bound - mean_reward,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.horizon as f64, p.proxy)).collect();
    Ok(RegretCurve {
        policy: kind.name(),
        slope: log_log_slope(&xy),
        points,
    })
}

/// Ordinary least-squares slope of `ln y` on `ln x`. NaN when fewer than two
/// points or any non-positive coordinate.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 || points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return f64::NAN;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [250.0, 500.0, 1000.0, 2000.0]
            .iter()
            .map(|&t: &f64| (t, 3.0 * t.powf(0.5)))
            .collect();
        assert!((log_log_slope(&pts) - 0.5).abs() < 1e-12);
        assert!(log_log_slope(&[(1.0, 1.0)]).is_nan());
        assert!(log_log_slope(&[(1.0, 1.0), (2.0, -1.0)]).is_nan());
    }
}
