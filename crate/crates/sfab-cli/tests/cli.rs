//! End-to-end CLI checks: exit codes, report schemas, config round-trip,
//! and byte determinism of emitted reports.

use std::process::Command;

fn sfab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sfab"))
}

#[test]
fn nlambda_example() {
    let out = sfab()
        .args(["nlambda", "--type", "A", "--rank", "1", "--q", "0=4,1=4", "--lambda", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"N\":\"80\""), "{text}");
}

#[test]
fn config_errors_exit_2() {
    // Mismatched conjugate parameters.
    let out = sfab()
        .args(["nlambda", "--type", "A", "--rank", "2", "--q", "0=2,1=2,2=3", "--lambda", "1,1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // BC with equal end parameters redirects to C.
    let out = sfab()
        .args(["info", "--type", "BC", "--rank", "2", "--q", "0=2,1=3,2=2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("C_2"), "{err}");
    // Unknown flags exit 2 (clap).
    let out = sfab().args(["nlambda", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spherical_schema() {
    let out = sfab()
        .args(["spherical", "--type", "A", "--rank", "1", "--q", "4", "--lambda", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["basis"], "monomial");
    assert_eq!(v["lambda"], serde_json::json!([2]));
    let coeffs = v["coeffs"].as_array().unwrap();
    // P'_2 = m_2 + (1 - q^{-1}) m_0.
    assert_eq!(coeffs.len(), 2);
    assert_eq!(coeffs[0]["mu"], serde_json::json!([0]));
    assert_eq!(coeffs[0]["value"], "1 - z0^-2");
    assert_eq!(coeffs[1]["mu"], serde_json::json!([2]));
    assert_eq!(coeffs[1]["value"], "1");
}

#[test]
fn config_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("sfab-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("run.json");
    let cfg = serde_json::json!({
        "root_system": {"type": "BC", "rank": 2},
        "params": {"q": {"0": "3", "1": "2", "2": "2"}},
        "task": {"lambda": [1, 0]},
        "output": {"pretty": false}
    });
    std::fs::write(&cfg_path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    let out = sfab()
        .args(["nlambda", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["lambda"], serde_json::json!([1, 0]));
    // Unknown keys are rejected.
    let bad = serde_json::json!({
        "root_system": {"type": "A", "rank": 1},
        "params": {"q": {"0": "2", "1": "2"}},
        "bogus": 1
    });
    std::fs::write(&cfg_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = sfab()
        .args(["nlambda", "--config", cfg_path.to_str().unwrap(), "--lambda", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn flat_config_and_single_entry() {
    let dir = std::env::temp_dir().join(format!("sfab-flat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("flat.json");
    std::fs::write(
        &cfg_path,
        r#"{"type": "BC", "rank": 1, "q": {"0": "4", "1": "2"}, "task": {"lambda": [2]}}"#,
    )
    .unwrap();
    let out = sfab()
        .args(["nlambda", "--config", cfg_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["N"], "96");
    // Single structure entry via --nu.
    let out = sfab()
        .args([
            "structure", "--type", "A", "--rank", "1", "--q", "4", "--lambda", "1", "--mu", "1",
            "--nu", "2",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 1);
    assert_eq!(rows[0]["a_numeric"], 0.8);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn deterministic_output() {
    let run = || {
        sfab()
            .args([
                "plancherel", "--type", "A", "--rank", "1", "--q", "3", "--max-height", "2",
                "--grid", "65",
            ])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "reports must be byte-identical");
}

#[test]
fn tree_verification() {
    let out = sfab()
        .args(["tree", "--q0", "4", "--q1", "2", "--depth", "8", "--verify", "all"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 5);
}

#[test]
fn phi_check_passes() {
    let out = sfab()
        .args(["phi-check", "--type", "BC", "--rank", "1", "--q", "0=4,1=2", "--max-height", "2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn plancherel_negative_control_fails_with_exit_1() {
    // Dropping the boundary term in the exceptional regime must fail the
    // orthogonality check, exit code 1.
    let out = sfab()
        .args([
            "plancherel", "--type", "BC", "--rank", "1", "--q", "0=4,1=2", "--max-height", "1",
            "--grid", "65", "--mode", "standard",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
