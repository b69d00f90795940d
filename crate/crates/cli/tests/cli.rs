use std::path::PathBuf;

use assert_cmd::Command;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str], input: &str, code: i32) -> Value {
    let out = Command::cargo_bin("colocal")
        .unwrap()
        .args(args)
        .arg("--input")
        .arg(data(input))
        .assert()
        .code(code)
        .get_output()
        .stdout
        .clone();
    serde_json::from_slice(&out).unwrap()
}

#[test]
fn conserved_basis_for_exclusion() {
    let v = run(&["conserved"], "conserved.json", 0);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["dimension"], 1);
    assert_eq!(v["result"]["basis"], serde_json::json!([["-1/2", "1/2"]]));
}

#[test]
fn float_mode_prints_numbers() {
    let v = run(&["conserved", "--mode", "float"], "conserved.json", 0);
    assert_eq!(v["mode"], "float");
    assert_eq!(v["result"]["basis"][0][1].as_f64(), Some(0.5));
}

#[test]
fn dims_on_single_edge() {
    let v = run(&["dims"], "dims_single_edge.json", 0);
    assert_eq!(v["result"]["components"], 3);
    assert_eq!(v["result"]["dim_Z1"], 1);
}

#[test]
fn identity_interaction_fails_iq() {
    let v = run(&["iq"], "iq_identity.json", 0);
    assert_eq!(v["result"]["holds"], false);
    assert_eq!(v["result"]["basis_size"], 1);
    assert_eq!(
        v["result"]["locales"][0]["witnesses"][0]["first"],
        serde_json::json!([1, 0])
    );
}

#[test]
fn iq_holds_for_exclusion() {
    let v = run(&["iq"], "iq.json", 0);
    assert_eq!(v["result"]["holds"], true);
}

#[test]
fn expansion_of_pair_product() {
    let v = run(&["expand"], "expand.json", 0);
    assert_eq!(v["result"]["nonzero"], 4);
    assert_eq!(v["result"]["uniform_radius"], 1);
    assert_eq!(
        v["result"]["expansion"]["components"]["3"]["values"][0],
        "1/4"
    );
}

#[test]
fn expansion_respects_subset_cap() {
    let v = run(&["expand"], "expand_too_many.json", 1);
    assert_eq!(v["error"]["kind"], "TooManySubsets");
}

#[test]
fn projection_of_pair_product() {
    let v = run(&["project"], "project.json", 0);
    assert_eq!(
        v["result"]["function"]["values"],
        serde_json::json!(["0", "1/2"])
    );
}

#[test]
fn circulation_is_not_closed() {
    let v = run(&["closed"], "closed_circulation.json", 1);
    assert_eq!(v["error"]["kind"], "NotClosed");
    assert_eq!(v["error"]["witness"]["integral"], "3");
    assert_eq!(v["error"]["witness"]["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn martingale_norms() {
    let v = run(&["martingale"], "martingale.json", 0);
    let r = &v["result"];
    assert_eq!(r["norms"][0]["squared"], "1/8");
    assert_eq!(r["norms"][1]["squared"], "1/4");
    assert_eq!(r["gaps"][0]["squared"], "1/8");
}

#[test]
fn varadhan_recovers_cocycle() {
    let v = run(&["varadhan"], "varadhan.json", 0);
    assert_eq!(v["result"]["cocycle"], serde_json::json!({"0": ["1"]}));
    assert_eq!(v["result"]["cocycle_identity"], true);
}

#[test]
fn tolerance_needs_float_mode() {
    Command::cargo_bin("colocal")
        .unwrap()
        .args(["conserved", "--tolerance", "1e-9", "--input"])
        .arg(data("conserved.json"))
        .assert()
        .code(2);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    Command::cargo_bin("colocal")
        .unwrap()
        .args(["conserved", "--input"])
        .arg(data("conserved.json"))
        .env("COLOCAL_THREADS", "zero")
        .assert()
        .code(2);
}

#[test]
fn malformed_json_is_a_domain_error() {
    let out = Command::cargo_bin("colocal")
        .unwrap()
        .arg("conserved")
        .write_stdin("{not json")
        .assert()
        .code(1)
        .get_output()
        .stdout
        .clone();
    let v: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(v["error"]["kind"], "InvalidInput");
}

#[test]
fn missing_schema_version_is_rejected() {
    Command::cargo_bin("colocal")
        .unwrap()
        .arg("conserved")
        .write_stdin(r#"{"interaction": {"preset": "exclusion"}, "measure": {"bernoulli": "1/2"}}"#)
        .assert()
        .code(1);
}

#[test]
fn report_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    Command::cargo_bin("colocal")
        .unwrap()
        .args(["dims", "--output"])
        .arg(&path)
        .arg("--input")
        .arg(data("dims_single_edge.json"))
        .assert()
        .success()
        .stdout("");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["result"]["dim_Z1"], 1);
}
