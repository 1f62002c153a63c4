//! End-to-end tests for the `plusi` binary: exit codes, JSON shapes, and
//! byte-level determinism of seeded reports.

use std::path::PathBuf;
use std::process::{Command, Output};

fn plusi() -> Command {
    let mut command = Command::new(env!("CARGO_BIN_EXE_plusi"));
    // Keep the environment from leaking a seed into the tests.
    command.env_remove("PLUSI_SEED");
    command
}

fn stdout(output: &Output) -> &str {
    std::str::from_utf8(&output.stdout).expect("stdout is UTF-8")
}

fn stderr(output: &Output) -> &str {
    std::str::from_utf8(&output.stderr).expect("stderr is UTF-8")
}

/// Write a fixture under the system temp directory, unique per test.
fn fixture(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!(
        "plusi-cli-{}-{name}.json",
        std::process::id()
    ));
    std::fs::write(&path, contents).expect("temp dir is writable");
    path
}

const HS_CIRCUIT: &str = r#"{
  "num_qubits": 2,
  "alphabet": "HSCCZ",
  "gates": [
    {"kind": "H", "qubits": [1]},
    {"kind": "S", "qubits": [1]}
  ]
}"#;

#[test]
fn verify_counts_suite_passes() {
    let output = plusi()
        .args(["verify", "--suite", "counts"])
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("counts.rnq1.golden"));
    assert!(text.contains("checks passed"), "table: {text}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let output = plusi()
        .args(["verify", "--suite", "nonsense"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("nonsense"));
}

#[test]
fn malformed_json_is_invalid_input() {
    let path = fixture("malformed", "this is not json");
    let output = plusi()
        .args(["compile", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(3));
    let _ = std::fs::remove_file(path);
}

#[test]
fn alphabet_violation_is_invalid_input() {
    // An X gate puts the circuit outside every compilable alphabet.
    let path = fixture(
        "alphabet",
        r#"{"num_qubits": 2, "alphabet": "FULL",
            "gates": [{"kind": "X", "qubits": [1]}]}"#,
    );
    let output = plusi()
        .args(["compile", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(3));
    let _ = std::fs::remove_file(path);
}

#[test]
fn oversized_register_is_capped() {
    let path = fixture(
        "wide",
        r#"{"num_qubits": 25, "alphabet": "HCCZ", "gates": []}"#,
    );
    let output = plusi()
        .args(["simulate", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(5));
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_cap_applies_before_simulation() {
    // Nine logical qubits stay compilable but exceed the --verify cap.
    let gates: Vec<String> = (1..=9)
        .map(|q| format!(r#"{{"kind": "S", "qubits": [{q}]}}"#))
        .collect();
    let path = fixture(
        "nine",
        &format!(
            r#"{{"num_qubits": 9, "alphabet": "HSCCZ", "gates": [{}]}}"#,
            gates.join(", ")
        ),
    );
    let output = plusi()
        .args(["compile", "--verify", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(5));
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_json_report_is_byte_identical_across_runs() {
    let run = || {
        plusi()
            .args(["verify", "--suite", "appendixC", "--json", "--seed", "7"])
            .output()
            .expect("binary runs")
    };
    let first = run();
    let second = run();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout, "seeded report must not drift");

    let report: serde_json::Value =
        serde_json::from_str(stdout(&first)).expect("report is JSON");
    assert_eq!(report["seed"], 7);
    assert_eq!(report["precision"], "f64");
    assert!(report["checks"].as_array().map(Vec::len).unwrap_or(0) > 0);
}

#[test]
fn seed_comes_from_the_environment_when_unset() {
    let output = plusi()
        .args(["verify", "--suite", "counts", "--json"])
        .env("PLUSI_SEED", "9")
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(stdout(&output)).expect("report is JSON");
    assert_eq!(report["seed"], 9);

    let output = plusi()
        .args(["verify", "--suite", "counts", "--json"])
        .env("PLUSI_SEED", "not-a-number")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn compile_emits_a_catalytic_program() {
    let path = fixture("compile", HS_CIRCUIT);
    let out = std::env::temp_dir().join(format!(
        "plusi-cli-{}-program.json",
        std::process::id()
    ));
    let output = plusi()
        .args(["compile", "--verify", "--in"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(stderr(&output).contains("verify: ok"));

    let program: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(program["n"], 2);
    assert_eq!(program["s_gate_count"], 1);
    assert_eq!(program["flag_qubit"], 3);
    assert_eq!(program["catalyst_qubit"], 4);
    assert_eq!(program["inner"]["alphabet"], "HCCZ");
    assert_eq!(program["inner"]["num_qubits"], 4);
    for gate in program["inner"]["gates"].as_array().unwrap() {
        let kind = gate["kind"].as_str().unwrap();
        assert!(kind == "H" || kind == "CCZ", "leaked gate kind {kind}");
    }
    let _ = std::fs::remove_file(path);
    let _ = std::fs::remove_file(out);
}

#[test]
fn strict_mode_lowers_controlled_s_first() {
    let path = fixture(
        "strict",
        r#"{"num_qubits": 2, "alphabet": "HCS",
            "gates": [{"kind": "H", "qubits": [2]},
                      {"kind": "CS", "qubits": [1, 2]}]}"#,
    );
    let output = plusi()
        .args(["compile", "--mode", "strict", "--verify", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let program: serde_json::Value =
        serde_json::from_str(stdout(&output)).expect("program is JSON");
    // Lowering widens 2 logical qubits to 3 before the catalytic stage.
    assert_eq!(program["n"], 3);
    assert_eq!(program["inner"]["alphabet"], "HCCZ");
    assert_eq!(program["inner"]["num_qubits"], 5);
    let _ = std::fs::remove_file(path);
}

#[test]
fn simulate_reports_amplitudes_for_named_inputs() {
    let path = fixture(
        "simulate",
        r#"{"num_qubits": 3, "alphabet": "FULL", "gates": []}"#,
    );
    let output = plusi()
        .args(["simulate", "--input", "1,+i,+", "--in"])
        .arg(&path)
        .output()
        .expect("binary runs");
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let report: serde_json::Value =
        serde_json::from_str(stdout(&output)).expect("report is JSON");
    assert_eq!(report["kind"], "circuit");
    let amplitudes = report["amplitudes"].as_array().unwrap();
    assert_eq!(amplitudes.len(), 4);
    let entry = amplitudes
        .iter()
        .find(|a| a["basis"] == "100")
        .expect("|100⟩ present");
    assert!((entry["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let entry = amplitudes
        .iter()
        .find(|a| a["basis"] == "110")
        .expect("|110⟩ present");
    assert!((entry["im"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let _ = std::fs::remove_file(path);
}

#[test]
fn counts_evaluates_and_scans() {
    let output = plusi()
        .args(["counts", "--n", "6", "--d", "5", "--formula", "rnq1"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    assert!(stdout(&output).contains("7495"));

    let output = plusi()
        .args(["counts", "--budget", "1121", "--json"])
        .output()
        .expect("binary runs");
    assert!(output.status.success());
    let report: serde_json::Value =
        serde_json::from_str(stdout(&output)).expect("report is JSON");
    assert_eq!(report["n_max"], 26);
    assert_eq!(report["d_max"], 28);

    // Mixing the two modes, or giving neither, is a usage error.
    let output = plusi()
        .args(["counts", "--n", "6", "--d", "5", "--budget", "100"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    let output = plusi().arg("counts").output().expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn infeasible_budget_is_invalid_input() {
    let output = plusi()
        .args(["counts", "--budget", "10"])
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(3));
}
