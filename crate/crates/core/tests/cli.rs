//! End-to-end checks of the `maa` binary: output files, stdout contract,
//! exit codes, and determinism across processes.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maa"))
}

fn write(path: &Path, body: &str) {
    std::fs::write(path, body).unwrap();
}

/// Two-antenna scenario whose optimum is found within a few dozen
/// generations; keeps every subprocess below a second.
const SCENARIO: &str = r#"{
    "n_antennas": 2,
    "segment_length_wl": 2.0,
    "min_spacing_wl": 0.5,
    "intended_deg": [60.0, 120.0],
    "unintended_deg": [90.0],
    "interference_threshold": 0.1
}"#;

const SMALL_CONFIG: &str = r#"{"population": 10, "max_generations": 60, "rng_seed": 7}"#;

fn run_optimize(dir: &Path, extra: &[&str]) -> Output {
    let scenario = dir.join("scenario.json");
    let config = dir.join("config.json");
    write(&scenario, SCENARIO);
    write(&config, SMALL_CONFIG);
    let mut cmd = bin();
    cmd.arg("optimize")
        .arg("--scenario")
        .arg(&scenario)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.join("out"));
    for arg in extra {
        cmd.arg(arg);
    }
    cmd.output().unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process was signalled")
}

#[test]
fn optimize_writes_all_outputs_and_reports_gain() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_optimize(dir.path(), &[]);
    let code = exit_code(&out);
    assert!(code == 0 || code == 2, "unexpected exit code {code}");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("best_min_gain:"));
    assert!(stdout.contains("feasible:"));
    assert!(stdout.contains("evaluations:"));

    let out_dir = dir.path().join("out");
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("result.json")).unwrap())
            .unwrap();
    assert!(result["best_min_gain"].as_f64().unwrap() > 0.0);
    assert_eq!(result["best"]["d"].as_array().unwrap().len(), 2);

    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert_eq!(
        trace.lines().count(),
        61,
        "one row per generation plus header"
    );
    assert!(trace.starts_with(
        "generation,best_brightness,best_min_gain,best_feasible,alpha,penalty_weight"
    ));

    let pattern = std::fs::read_to_string(out_dir.join("pattern.csv")).unwrap();
    assert_eq!(pattern.lines().count(), 182, "0..=180 degrees plus header");
}

#[test]
fn optimize_is_deterministic_per_seed_and_varies_across_seeds() {
    let dir = tempfile::tempdir().unwrap();
    run_optimize(dir.path(), &["--seed", "11"]);
    let first = std::fs::read(dir.path().join("out/result.json")).unwrap();
    run_optimize(dir.path(), &["--seed", "11"]);
    let second = std::fs::read(dir.path().join("out/result.json")).unwrap();
    assert_eq!(
        first, second,
        "same seed must reproduce byte-identical results"
    );

    run_optimize(dir.path(), &["--seed", "12"]);
    let third = std::fs::read(dir.path().join("out/result.json")).unwrap();
    assert_ne!(first, third, "different seeds should explore differently");
}

#[test]
fn optimize_flag_overrides_take_precedence_over_config() {
    let dir = tempfile::tempdir().unwrap();
    run_optimize(dir.path(), &["--generations", "5", "--omega", "4"]);
    let out_dir = dir.path().join("out");
    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 6, "five generations plus header");
    let result: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("result.json")).unwrap())
            .unwrap();
    // 4 fireflies for 5 generations cannot reach the 10x60 default workload.
    assert!(result["evaluations"].as_u64().unwrap() < 200);
}

#[test]
fn missing_scenario_file_exits_one_with_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    write(&config, SMALL_CONFIG);
    let out = bin()
        .arg("optimize")
        .arg("--scenario")
        .arg(dir.path().join("nope.json"))
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.starts_with("error:"), "stderr was: {stderr}");
    assert!(
        stderr.contains("nope.json"),
        "error must name the file: {stderr}"
    );
}

#[test]
fn scenario_that_cannot_fit_the_antennas_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("scenario.json");
    let config = dir.path().join("config.json");
    // 8 antennas at half-wavelength spacing need 3.5 wavelengths; 2 provided.
    write(
        &scenario,
        r#"{"n_antennas": 8, "segment_length_wl": 2.0, "min_spacing_wl": 0.5,
            "intended_deg": [90.0], "unintended_deg": [], "interference_threshold": 0.1}"#,
    );
    write(&config, SMALL_CONFIG);
    let out = bin()
        .arg("optimize")
        .arg("--scenario")
        .arg(&scenario)
        .arg("--config")
        .arg(&config)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("error:"));
}

#[test]
fn help_exits_zero_and_prints_usage() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("Usage"));
}

#[test]
fn unknown_flag_exits_one() {
    let out = bin().arg("optimize").arg("--frobnicate").output().unwrap();
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn pattern_resamples_a_stored_result() {
    let dir = tempfile::tempdir().unwrap();
    run_optimize(dir.path(), &[]);
    let csv_path = dir.path().join("coarse.csv");
    let out = bin()
        .arg("pattern")
        .arg("--result")
        .arg(dir.path().join("out/result.json"))
        .arg("--step")
        .arg("2.5")
        .arg("--out")
        .arg(&csv_path)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    let body = std::fs::read_to_string(&csv_path).unwrap();
    assert_eq!(
        body.lines().count(),
        74,
        "0..180 in 2.5-degree steps plus header"
    );
    assert!(body.starts_with("angle_deg,gain"));
}

#[test]
fn pattern_rejects_nonpositive_step() {
    let dir = tempfile::tempdir().unwrap();
    run_optimize(dir.path(), &[]);
    let out = bin()
        .arg("pattern")
        .arg("--result")
        .arg(dir.path().join("out/result.json"))
        .arg("--step")
        .arg("0")
        .arg("--out")
        .arg(dir.path().join("coarse.csv"))
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn oracle_writes_fixture_with_embedded_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("scenario.json");
    let grid = dir.path().join("grid.json");
    write(&scenario, SCENARIO);
    // Coarse grid keeps the enumeration around a few thousand points.
    write(
        &grid,
        r#"{"position_step": 0.25, "phase_step": 0.7853981633974483, "amplitude_levels": 3}"#,
    );
    let fixture = dir.path().join("fixture.json");
    let out = bin()
        .arg("oracle")
        .arg("--scenario")
        .arg(&scenario)
        .arg("--grid")
        .arg(&grid)
        .arg("--out")
        .arg(&fixture)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("achieved_min_gain:"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
    assert_eq!(doc["scenario"]["n_antennas"], 2);
    assert_eq!(doc["grid"]["amplitude_levels"], 3);
    assert!(doc["achieved_min_gain"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["best"]["w"].as_array().unwrap().len(), 2);
}

#[test]
fn campaign_produces_summary_and_sweep_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    write(
        &spec,
        r#"{
            "base_scenario": {
                "n_antennas": 2, "segment_length_wl": 2.0, "min_spacing_wl": 0.5,
                "interference_threshold": 0.1
            },
            "n_distributions": 1,
            "runs_per_distribution": 2,
            "fixed_intended_deg": [60.0, 120.0],
            "fixed_unintended_deg": [90.0],
            "fa_config": {"population": 8, "max_generations": 40},
            "sweep": [{"parameter": "population", "values": [8, 10]}],
            "master_seed": 3
        }"#,
    );
    let out_dir = dir.path().join("campaign");
    let out = bin()
        .arg("campaign")
        .arg("--spec")
        .arg(&spec)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    let code = exit_code(&out);
    assert!(code == 0 || code == 2, "unexpected exit code {code}");
    for name in [
        "summary.json",
        "gain_vs_na.csv",
        "gain_vs_q.csv",
        "gain_vs_omega.csv",
        "gain_vs_r.csv",
        "pattern.csv",
    ] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("point ")).count(),
        2,
        "one report line per sweep point"
    );
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["points"].as_array().unwrap().len(), 2);
}

#[test]
fn campaign_with_all_feasible_runs_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    // A fixed high multiplier pins the search inside the feasible region,
    // so every run ends with a clean feasibility flag.
    write(
        &spec,
        r#"{
            "base_scenario": {
                "n_antennas": 2, "segment_length_wl": 2.0, "min_spacing_wl": 0.5,
                "interference_threshold": 0.1
            },
            "n_distributions": 1,
            "runs_per_distribution": 3,
            "fixed_intended_deg": [60.0, 120.0],
            "fixed_unintended_deg": [90.0],
            "fa_config": {
                "population": 10, "max_generations": 80,
                "penalty_schedule": 100000000.0
            },
            "master_seed": 5
        }"#,
    );
    let out = bin()
        .arg("campaign")
        .arg("--spec")
        .arg(&spec)
        .arg("--out")
        .arg(dir.path().join("campaign"))
        .output()
        .unwrap();
    assert_eq!(
        exit_code(&out),
        0,
        "stderr: {}",
        String::from_utf8(out.stderr).unwrap()
    );
}

#[test]
fn complexity_reports_measured_against_predicted() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("config.json");
    write(&config, r#"{"population": 6, "max_generations": 20}"#);
    let out = bin()
        .arg("complexity")
        .arg("--config")
        .arg(&config)
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("predicted_operations:"));
    assert!(stdout.contains("measured_evaluations:"));
    assert!(stdout.contains("measured_per_predicted:"));
}
