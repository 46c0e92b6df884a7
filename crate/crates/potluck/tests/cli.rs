//! End-to-end tests of the `potluck` binary: exit codes, stderr error
//! objects, stdout JSON, and the sweep front-end.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use potluck::scenario::{ScenarioFile, StrategySpec, WeightSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_potluck"))
}

fn write_scenario(dir: &Path, name: &str, file: &ScenarioFile) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(file).unwrap()).unwrap();
    path
}

fn linear_file(horizon: u64) -> ScenarioFile {
    ScenarioFile {
        d: 1,
        rewards: vec!["1*u1".into(), "2*(1-u1)".into()],
        strategy: StrategySpec::Greedy,
        horizon,
        x0: None,
        seed: 7,
        weights: None,
        record_stride: None,
    }
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn stderr_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stderr).unwrap_or_else(|e| {
        panic!(
            "stderr not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn run_writes_csv_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "s.json", &linear_file(200_000));
    let out_csv = dir.path().join("traj.csv");
    let out = bin()
        .args(["run"])
        .arg(&scenario)
        .arg("-o")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = fs::read_to_string(&out_csv).unwrap();
    let final_row = csv.lines().last().unwrap();
    let fields: Vec<&str> = final_row.split(',').collect();
    // header is n,choice,reward,running_avg,S_n,bar_0,bar_1
    let running_avg: f64 = fields[3].parse().unwrap();
    assert!(
        (running_avg - 2.0 / 3.0).abs() < 1e-2,
        "final running_avg {running_avg}"
    );

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("traj.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["seed"], 7);
    assert_eq!(meta["generator"], "chacha8");
    assert_eq!(meta["scenario_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn geometric_weights_exit_2_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(1000);
    file.weights = Some(WeightSpec::Geometric { r: 2.0 });
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out_csv = dir.path().join("traj.csv");

    let out = bin()
        .args(["run"])
        .arg(&scenario)
        .arg("-o")
        .arg(&out_csv)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["code"], "weights_rejected");
    assert!(err["error"]["message"]
        .as_str()
        .unwrap()
        .contains("delta_n/S_n"));

    // --force runs it and embeds the verdict in the metadata
    let out = bin()
        .args(["run"])
        .arg(&scenario)
        .arg("-o")
        .arg(&out_csv)
        .arg("--force")
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("traj.csv.meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["weight_validation"]["pass"], false);
    assert_eq!(meta["weight_validation"]["vanishing_ratio_pass"], false);
}

#[test]
fn malformed_json_exits_1_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"d\": 1, \"rewards\": [").unwrap();
    let out = bin()
        .args(["run"])
        .arg(&path)
        .args(["-o", "/dev/null"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = stderr_json(&out);
    assert_eq!(err["error"]["code"], "json");
    // serde_json reports line and column
    assert!(err["error"]["message"].as_str().unwrap().contains("line"));
}

#[test]
fn invalid_rewards_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(100);
    file.rewards[1] = "2*(1-u3)".into();
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out = bin()
        .args(["run"])
        .arg(&scenario)
        .args(["-o", "/dev/null"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "scenario_invalid");
}

#[test]
fn qstar_prints_the_linear_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "s.json", &linear_file(100));
    let out = bin().args(["qstar"]).arg(&scenario).output().unwrap();
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert!((json["q_star"].as_f64().unwrap() - 0.75).abs() <= 2e-5);
    let argmax = json["argmax"].as_array().unwrap();
    assert!((argmax[1].as_f64().unwrap() - 0.5).abs() <= 1e-4);
}

#[test]
fn qstar_of_constant_rewards() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(100);
    file.rewards = vec!["3".into(), "3".into()];
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out = bin()
        .args(["qstar", "--resolution", "0.05", "--refine", "0"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(out.status.success());
    let q = stdout_json(&out)["q_star"].as_f64().unwrap();
    assert!((q - 3.0).abs() < 1e-12, "q_star = {q}");
}

#[test]
fn check_potential_passes_for_d1_and_probes_d2() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "d1.json", &linear_file(100));
    let out = bin()
        .args(["check-potential"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let json = stdout_json(&out);
    assert_eq!(json["mode"], "gradient_residual");
    assert_eq!(json["pass"], true);
    assert!(json["max_residual"].as_f64().unwrap() < 1e-6);

    // symmetric d = 2 field passes
    let mut file = linear_file(100);
    file.d = 2;
    file.rewards = vec!["u0".into(), "u1".into(), "u2".into()];
    let scenario = write_scenario(dir.path(), "d2.json", &file);
    let out = bin()
        .args(["check-potential"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["mode"], "integrability");
    assert_eq!(json["pass"], true);

    // rotational field fails with exit code 2
    let mut file = linear_file(100);
    file.d = 2;
    file.rewards = vec!["0".into(), "u2".into(), "0".into()];
    let scenario = write_scenario(dir.path(), "curl.json", &file);
    let out = bin()
        .args(["check-potential"])
        .arg(&scenario)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let json = stdout_json(&out);
    assert_eq!(json["pass"], false);
    assert!((json["max_asymmetry"].as_f64().unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn kronecker_presets_and_custom_files() {
    let out = bin()
        .args(["kronecker", "--preset", "alternating", "-n", "100000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert!(json["abel_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(json["diagnostic"]["consistent"], true);
    assert!(json["diagnostic"]["c_tail_min"].as_f64().unwrap() >= 0.690);

    let out = bin()
        .args(["kronecker", "--preset", "harmonic", "-n", "100000"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let json = stdout_json(&out);
    assert_eq!(json["diagnostic"]["hypothesis_finite"], false);

    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("series.csv");
    let mut text = String::from("a,b\n");
    for k in 1..=200 {
        let a = if k % 2 == 1 { 1.0 } else { -1.0 };
        text.push_str(&format!("{a},{k}\n"));
    }
    fs::write(&series, text).unwrap();
    let out = bin()
        .args(["kronecker", "--preset", "custom", "--path"])
        .arg(&series)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_json(&out)["len"], 200);
}

#[test]
fn sweep_finds_the_optimal_iid_probability() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(200_000);
    file.strategy = StrategySpec::Iid { p: vec![0.5, 0.5] };
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out_dir = dir.path().join("sweep");
    let out = bin()
        .args(["sweep"])
        .arg(&scenario)
        .args(["--param", "strategy.p", "--grid", "0:1:21", "-o"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), "p,A_final,q(p)");
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 21);
    let best = rows.iter().max_by(|x, y| x[1].total_cmp(&y[1])).unwrap();
    assert!(
        (best[0] - 0.5).abs() <= 0.05 + 1e-12,
        "empirical argmax p = {} should sit within one grid cell of 0.5",
        best[0]
    );
    assert!((best[1] - 0.75).abs() < 1e-2, "best A_final = {}", best[1]);

    // q(p) column is exact: q = 3 p (1 - p)
    for row in &rows {
        let expect = 3.0 * row[0] * (1.0 - row[0]);
        assert!((row[2] - expect).abs() < 1e-12);
    }
}

#[test]
fn sweep_is_thread_count_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(20_000);
    file.strategy = StrategySpec::Iid { p: vec![0.5, 0.5] };
    let scenario = write_scenario(dir.path(), "s.json", &file);

    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out_dir = dir.path().join(format!("sweep_{threads}"));
        let out = bin()
            .env("POTLUCK_THREADS", threads)
            .args(["sweep"])
            .arg(&scenario)
            .args(["--param", "strategy.p", "--grid", "0:1:9", "-o"])
            .arg(&out_dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        outputs.push(fs::read(out_dir.join("summary.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn sweep_over_weight_kinds_agrees_across_schedules() {
    let dir = tempfile::tempdir().unwrap();
    let file = linear_file(200_000);
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out_dir = dir.path().join("wsweep");
    let out = bin()
        .args(["sweep"])
        .arg(&scenario)
        .args([
            "--param",
            "weights.kind",
            "--grid",
            "constant,power:0.5",
            "-o",
        ])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    let rows: Vec<Vec<&str>> = summary
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);
    let a_const: f64 = rows[0][1].parse().unwrap();
    let a_power: f64 = rows[1][1].parse().unwrap();
    assert!(
        (a_const - a_power).abs() < 1e-2,
        "constant {a_const} vs power(0.5) {a_power}"
    );
}

#[test]
fn sweep_single_point_grid() {
    let dir = tempfile::tempdir().unwrap();
    let mut file = linear_file(10_000);
    file.strategy = StrategySpec::Iid { p: vec![0.5, 0.5] };
    let scenario = write_scenario(dir.path(), "s.json", &file);
    let out_dir = dir.path().join("one");
    let out = bin()
        .args(["sweep"])
        .arg(&scenario)
        .args(["--param", "strategy.p", "--grid", "0.5:0.5:1", "-o"])
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 2);
}

#[test]
fn sweep_rejects_unknown_parameter_paths() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = write_scenario(dir.path(), "s.json", &linear_file(100));
    let out = bin()
        .args(["sweep"])
        .arg(&scenario)
        .args(["--param", "strategy.epsilon", "--grid", "0:1:3", "-o"])
        .arg(dir.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["code"], "unknown_sweep_param");
}
