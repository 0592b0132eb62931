use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde_json::Value;

use roguewk::env::EpisodeConfig;
use roguewk::estimation::ConfidenceConfig;
use roguewk::harness::{self, THREADS_VAR};
use roguewk::policy::{PolicyKind, PolicySettings};
use roguewk::spec::{self, BenchmarkSpec};

#[derive(Parser)]
#[command(name = "roguewk", version, about = "Habituating bandits with knapsacks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an episode config or benchmark spec and print derived constants.
    Validate { config: PathBuf },
    /// Run one episode and write the per-round CSV to stdout.
    Trace {
        config: PathBuf,
        #[arg(long, default_value = "roguewk_ucb")]
        policy: PolicyKind,
        #[arg(long)]
        seed: Option<u64>,
        /// Confidence radius scale.
        #[arg(long)]
        xi: Option<f64>,
        /// Also write per-arm confidence bundles to this CSV.
        #[arg(long)]
        bundle: Option<PathBuf>,
        #[arg(long, num_args = 1..)]
        overrides: Vec<String>,
    },
    /// Run a benchmark spec and write results.csv, summary.csv, improvement.txt.
    #[command(after_help = "Set ROGUEWK_THREADS to cap the worker threads.")]
    Bench {
        spec: PathBuf,
        #[arg(long, num_args = 1..)]
        overrides: Vec<String>,
    },
    /// Compare the exact oracle with the LP upper bound on random tiny instances.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Proxy regret against horizon; CSV to stdout, fitted slope to stderr.
    RegretCurve {
        config: PathBuf,
        #[arg(long, default_value = "roguewk_ucb")]
        policy: PolicyKind,
        /// Per-round budget rate b; the budget is b * T.
        #[arg(long, default_value_t = 0.2)]
        rate: f64,
        #[arg(long, value_delimiter = ',', default_value = "250,500,1000,2000")]
        horizons: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        replicates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        xi: Option<f64>,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn load_config(path: &Path, overrides: &[String]) -> Result<EpisodeConfig> {
    let mut doc = spec::read_json(path)?;
    spec::apply_overrides(&mut doc, overrides)?;
    Ok(EpisodeConfig::from_file(&serde_json::from_value(doc)?)?)
}

fn settings(config: &EpisodeConfig, xi: Option<f64>) -> PolicySettings {
    let mut s = PolicySettings::for_config(config);
    if let Some(xi) = xi {
        s.confidence.radius_scale = xi;
    }
    s
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { config } => validate(&config),
        Command::Trace {
            config,
            policy,
            seed,
            xi,
            bundle,
            overrides,
        } => {
            let cfg = load_config(&config, &overrides)?;
            let seed = seed.unwrap_or(cfg.seed);
            let ep = harness::run_episode_traced(&cfg, policy, &settings(&cfg, xi), seed)?;
            harness::write_trace(io::stdout().lock(), &ep.trace, cfg.arm_count(), cfg.resources())?;
            if let Some(path) = bundle {
                let file = std::fs::File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))?;
                harness::write_bundles(file, &ep.trace, cfg.resources())?;
            }
            eprintln!(
                "tau = {}, reward = {}, plays = {}",
                ep.record.tau, ep.record.cumulative_reward, ep.record.plays
            );
            Ok(())
        }
        Command::Bench { spec, overrides } => {
            let spec = BenchmarkSpec::load(&spec, &overrides)?;
            eprintln!(
                "running {} episodes ({} policies x {} budgets x {} replicates); {THREADS_VAR} caps threads",
                spec.record_count(),
                spec.policies.len(),
                spec.budgets.len(),
                spec.replicates
            );
            let outcome = harness::run_benchmark(&spec)?;
            harness::write_results(&spec.output_dir, &outcome, spec.base_config.arm_count())?;
            eprintln!("wrote {}", spec.output_dir.display());
            match outcome.improvement {
                Some(v) => println!("{v}"),
                None => println!("NA"),
            }
            Ok(())
        }
        Command::OracleCheck { instances, seed } => {
            let checks = harness::check_upper_bound(instances, seed)?;
            println!("instance,arms,horizon,oracle,bound,holds");
            for (i, c) in checks.iter().enumerate() {
                println!(
                    "{i},{},{},{},{},{}",
                    c.config.arm_count(),
                    c.config.horizon,
                    c.oracle,
                    c.bound,
                    c.holds()
                );
            }
            let failed = checks.iter().filter(|c| !c.holds()).count();
            eprintln!("{failed} of {instances} instances exceed the bound");
            Ok(())
        }
        Command::RegretCurve {
            config,
            policy,
            rate,
            horizons,
            replicates,
            seed,
            xi,
        } => {
            let template = load_config(&config, &[])?;
            let curve = harness::regret_proxy_curve(policy, &template, rate, &horizons, replicates, seed, |c| {
                settings(c, xi)
            })?;
            println!("horizon,bound,mean_reward,proxy");
            for p in &curve.points {
                println!("{},{},{},{}", p.horizon, p.bound, p.mean_reward, p.proxy);
            }
            eprintln!("{} log-log slope: {}", curve.policy, curve.slope);
            Ok(())
        }
    }
}

fn validate(path: &Path) -> Result<()> {
    let doc: Value = spec::read_json(path)?;
    let config = if doc.get("config").is_some() {
        let spec = BenchmarkSpec::load(path, &[])?;
        println!(
            "benchmark spec: {} policies, {} budgets, {} replicates",
            spec.policies.len(),
            spec.budgets.len(),
            spec.replicates
        );
        spec.base_config
    } else {
        EpisodeConfig::from_file(&serde_json::from_value(doc)?)?
    };
    let c = ConfidenceConfig::for_config(&config);
    println!("arms: {}, resources: {}", config.arm_count(), config.resources());
    println!("L_h = {}", config.contraction());
    for arm in &config.arms {
        println!(
            "arm {}: state domain [{}, {}]",
            arm.id, arm.state_domain.lo, arm.state_domain.hi
        );
    }
    println!("diam(X) = {}", config.diameter());
    println!("L_g = {}", c.l_g);
    println!("L_f = {}", c.l_f);
    println!("L_p = {}", c.l_p);
    println!("b = B/T = {}", config.rate());
    println!("ok");
    Ok(())
}
