use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn roguewk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roguewk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn three_arm() -> String {
    fs::read_to_string(configs().join("three_arm.json")).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn validate_prints_constants() {
    let path = configs().join("three_arm.json");
    let out = roguewk(&["validate", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("L_h = 0.7"), "{text}");
    assert!(text.contains("b = B/T = 0.1"), "{text}");
    assert!(text.trim_end().ends_with("ok"));

    let spec = configs().join("default_bench.json");
    assert!(roguewk(&["validate", spec.to_str().unwrap()]).status.success());
}

#[test]
fn validate_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let expanding = write(dir.path(), "a.json", &three_arm().replacen("\"A\": 0.7", "\"A\": 1.0", 1));
    let out = roguewk(&["validate", &expanding]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("contraction"), "{}", stderr(&out));

    let cost = write(dir.path(), "c.json", &three_arm().replacen("[0.2, 0.8, 0.5]", "[0.2, 1.2, 0.5]", 1));
    let out = roguewk(&["validate", &cost]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("cost"), "{}", stderr(&out));

    let broken = write(dir.path(), "p.json", "{\n  \"arms\": [\n    {\"A\": 0.2,,}\n  ]\n}\n");
    let out = roguewk(&["validate", &broken]);
    assert!(!out.status.success());
    let err = stderr(&out);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn trace_writes_one_row_per_round() {
    let path = configs().join("three_arm.json");
    let out = roguewk(&[
        "trace",
        path.to_str().unwrap(),
        "--policy",
        "naive_ucb",
        "--seed",
        "3",
        "--overrides",
        "T=5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,arm,reward,cost_1,cost_2,cost_3,x_true_0,x_true_1,x_true_2,g_ucb_0,g_ucb_1,g_ucb_2,null_mass"
    );
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty() && rows.len() <= 5);
    assert!(stderr(&out).contains("tau = "));
}

#[test]
fn trace_spending_is_reconstructible_with_deterministic_costs() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "det.json",
        r#"{
  "arms": [
    {"A": 0.5, "B": -0.5, "K": 0.5, "alpha": 0.0, "beta": 1.0, "cost_low": [0.25], "cost_high": [0.25]},
    {"A": 0.3, "B": -0.2, "K": 0.1, "alpha": 0.3, "beta": 0.5, "cost_low": [0.5], "cost_high": [0.5]}
  ],
  "x0": [0.2, 0.4],
  "T": 80,
  "budget": 4.0
}"#,
    );
    let bundle = dir.path().join("bundle.csv");
    let out = roguewk(&["trace", &config, "--seed", "1", "--bundle", bundle.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let mut spent = 0.0;
    let mut nulls = 0;
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let arm: i64 = cells[1].parse().unwrap();
        let cost: f64 = cells[3].parse().unwrap();
        match arm {
            -1 => {
                nulls += 1;
                assert_eq!(cost, 0.0);
            }
            0 => assert_eq!(cost, 0.25),
            1 => assert_eq!(cost, 0.5),
            other => panic!("arm {other}"),
        }
        spent += cost;
    }
    // Quarter and half costs sum exactly, so tau is determined by the trace.
    let tau: usize = stderr(&out)
        .split("tau = ")
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(spent > 4.0, tau <= 80);
    assert!(nulls + 1 <= text.lines().count());
    let bundles = fs::read_to_string(bundle).unwrap();
    assert_eq!(bundles.lines().next().unwrap(), "t,arm,g_ucb,c_lcb_1,x_hat0");
}

#[test]
fn trace_encodes_null_action() {
    // A unit-cost arm at rate 0.05 forces the LP to put mass on idling.
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "idle.json",
        r#"{
  "arms": [
    {"A": 0.5, "B": -0.5, "K": 0.5, "alpha": 0.0, "beta": 1.0, "cost_low": [1.0], "cost_high": [1.0]}
  ],
  "x0": [0.2],
  "T": 400,
  "budget": 20.0
}"#,
    );
    let out = roguewk(&["trace", &config, "--policy", "sw_ucb", "--seed", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().skip(1).any(|l| l.split(',').nth(1) == Some("-1")), "{text}");
}

#[test]
fn bench_writes_grid_and_creates_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fresh/results");
    let spec = configs().join("default_bench.json");
    let out = roguewk(&[
        "bench",
        spec.to_str().unwrap(),
        "--overrides",
        "replicates=2",
        &format!("output_dir={}", out_dir.display()),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let results = fs::read_to_string(out_dir.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 3 * 30 * 2);
    let improvement = fs::read_to_string(out_dir.join("improvement.txt")).unwrap();
    assert_eq!(improvement.trim(), stdout(&out).trim());
    assert!(improvement.trim().parse::<f64>().is_ok());
    assert!(out_dir.join("summary.csv").exists());
}

#[test]
fn bench_rejects_unknown_override() {
    let spec = configs().join("default_bench.json");
    let out = roguewk(&["bench", spec.to_str().unwrap(), "--overrides", "replicate=2"]);
    assert!(!out.status.success());
    assert!(stderr(&out).contains("replicate"), "{}", stderr(&out));
}

#[test]
fn oracle_check_reports_every_instance() {
    let out = roguewk(&["oracle-check", "--instances", "10", "--seed", "3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "instance,arms,horizon,oracle,bound,holds");
    assert_eq!(text.lines().count(), 11);
    assert!(stderr(&out).contains("of 10 instances"));
}

#[test]
fn regret_curve_reports_slope() {
    let path = configs().join("stationary.json");
    let out = roguewk(&[
        "regret-curve",
        path.to_str().unwrap(),
        "--policy",
        "naive_ucb",
        "--horizons",
        "50,100",
        "--replicates",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "horizon,bound,mean_reward,proxy");
    assert_eq!(text.lines().count(), 3);
    assert!(stderr(&out).contains("log-log slope"));
}
