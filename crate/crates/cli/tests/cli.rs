use std::path::Path;
use std::process::{Command, Output};

use cecot_cli::{InstanceFile, ReportFile};

fn cecot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cecot")).args(args).output().unwrap()
}

fn random_to(path: &Path, extra: &[&str]) {
    let mut args = vec!["random", "--p", "3", "--m", "2", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = cecot(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

const ZERO: &str = r#"{
  "format": "cecot-instance/1",
  "params": {"p": 2, "m": 1},
  "complex": {"lo": 0, "dims": [], "actions": [], "differentials": []}
}"#;

#[test]
fn random_instance_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    let rep = dir.path().join("r.json");
    random_to(&inst, &["--lo", "-2", "--window", "3", "--seed", "17"]);
    let out = cecot(&["verify", inst.to_str().unwrap(), "--out", rep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = ReportFile::parse(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert!(report.passed);
    assert_eq!(report.command, "verify");
    assert!(report.input_digest.starts_with("sha256:"));
    assert!(report.timings.is_none());
    assert!(report.checks.iter().any(|c| c.name.starts_with("hom-vanishing")));
}

#[test]
fn generated_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    random_to(&inst, &["--window", "4", "--maxdim", "5", "--seed", "2"]);
    let text = std::fs::read_to_string(&inst).unwrap();
    let parsed = InstanceFile::parse(&text).unwrap();
    parsed.to_complex().unwrap();
    assert_eq!(parsed.to_text(), text);
}

#[test]
fn corrupted_differential_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("bad.json");
    // d^1 ∘ d^0 = x ≠ 0 on R = F_3[x]/(x^2)
    let text = r#"{
  "format": "cecot-instance/1",
  "params": {"p": 3, "m": 2},
  "complex": {
    "lo": 0,
    "dims": [2, 2, 2],
    "actions": [[[0, 0], [1, 0]], [[0, 0], [1, 0]], [[0, 0], [1, 0]]],
    "differentials": [[[0, 0], [1, 0]], [[1, 0], [0, 1]]]
  }
}"#;
    std::fs::write(&inst, text).unwrap();
    let out = cecot(&["verify", inst.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invalid complex at degree 0"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn zero_instance_passes_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("zero.json");
    std::fs::write(&inst, ZERO).unwrap();
    let p = inst.to_str().unwrap();
    assert_eq!(cecot(&["verify", p]).status.code(), Some(0));
    let cert = cecot(&["certify", p]);
    assert_eq!(cert.status.code(), Some(0));
    let rep = ReportFile::parse(&String::from_utf8(cert.stdout).unwrap()).unwrap();
    assert!(rep.checks.iter().any(|c| c.name == "empty certificate" && c.passed));
    let ext = cecot(&["ext", p, "--module", "Q", "--depth", "2"]);
    assert_eq!(ext.status.code(), Some(0));
    let rep = ReportFile::parse(&String::from_utf8(ext.stdout).unwrap()).unwrap();
    let dims: Vec<u64> = rep.payload.unwrap()["ext"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["dim"].as_u64().unwrap())
        .collect();
    assert!(dims.iter().all(|&d| d == 0));
}

#[test]
fn ext_of_free_source_is_concentrated_in_degree_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("m.json");
    random_to(&inst, &["--window", "0", "--maxdim", "5", "--seed", "5"]);
    let out = cecot(&["ext", inst.to_str().unwrap(), "--module", "Q", "--depth", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let rep = ReportFile::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    for e in rep.payload.unwrap()["ext"].as_array().unwrap() {
        if e["degree"].as_i64().unwrap() != 0 {
            assert_eq!(e["dim"].as_u64().unwrap(), 0, "{e}");
        }
    }
}

#[test]
fn shallow_jmax_for_ext_reports_the_requirement() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    random_to(&inst, &["--seed", "1"]);
    let out = cecot(&["ext", inst.to_str().unwrap(), "--depth", "6", "--jmax", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("jmax >="));
}

#[test]
fn unsaturated_tower_is_a_verification_failure() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    random_to(&inst, &["--lo", "-3", "--window", "3", "--maxdim", "4", "--seed", "8"]);
    let out = cecot(&["verify", inst.to_str().unwrap(), "--tower-depth", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
}

#[test]
fn timings_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    random_to(&inst, &["--seed", "4"]);
    let out = cecot(&["certify", inst.to_str().unwrap(), "--timings"]);
    let rep = ReportFile::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let stages: Vec<String> = rep.timings.unwrap().into_iter().map(|t| t.stage).collect();
    assert_eq!(stages, ["build_ce", "certify_cofiltered", "verify_certificate"]);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(cecot(&["verify", "/nonexistent/instance.json"]).status.code(), Some(2));
    assert_eq!(cecot(&["verify"]).status.code(), Some(2));
    assert_eq!(cecot(&["random", "--p", "4", "--m", "2"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("x.json");
    std::fs::write(&inst, ZERO).unwrap();
    assert_eq!(
        cecot(&["ext", inst.to_str().unwrap(), "--module", "3,1"]).status.code(),
        Some(2)
    );
}

#[test]
fn binary_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gen = [
        "random", "--p", "3", "--m", "2", "--lo", "-1", "--window", "2", "--seed", "9",
    ];
    let (a, b) = (cecot(&gen), cecot(&gen));
    assert_eq!(a.stdout, b.stdout);
    let inst = dir.path().join("inst.json");
    std::fs::write(&inst, &a.stdout).unwrap();
    let p = inst.to_str().unwrap();
    for cmd in [
        vec!["verify", p, "--seed", "3", "--samples", "6"],
        vec!["certify", p],
        vec!["ext", p, "--module", "k", "--depth", "3"],
    ] {
        let (x, y) = (cecot(&cmd), cecot(&cmd));
        assert_eq!(x.status.code(), Some(0), "{}", cmd[0]);
        assert_eq!(x.stdout, y.stdout, "{}", cmd[0]);
    }
}
