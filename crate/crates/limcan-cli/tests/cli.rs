//! End-to-end runs of the `limcan` binary on the bundled fixtures.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn limcan(args: &[&str]) -> (Value, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_limcan")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (json, out.status.code().expect("exit code"))
}

#[test]
fn disconnected_graph_is_an_input_error() {
    let (v, code) = limcan(&["validate", "--graph", &fixture("disconnected.json")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "input");
    assert_eq!(v["command"], "validate");
}

#[test]
fn validate_reports_genus() {
    let (v, code) = limcan(&["validate", "--graph", &fixture("k4.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["connected"], true);
    assert_eq!(v["result"]["genus"], 3);
}

#[test]
fn output_is_deterministic_and_records_the_seed() {
    let args = ["--seed", "11", "realize", "--graph", &fixture("k4.json"), "--pair", &fixture("k4_pair.json")];
    let (a, _) = limcan(&args);
    let (b, code) = limcan(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
}

#[test]
fn upmin_of_the_example_function() {
    let (v, code) = limcan(&["setfn", "--input", &fixture("example_phi.json"), "--op", "upmin"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["values"]["u1,u2,u3"], "1/1");
    assert_eq!(v["result"]["values"]["u0,u2"], "3/1");
}

#[test]
fn fan_of_the_first_vertex_brick() {
    let (v, code) = limcan(&["fan", "--graph", &fixture("k4.json"), "--brick", "B0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["maximal"].as_array().unwrap().len(), 3);
}

#[test]
fn squash_by_circuit_labels() {
    let (v, code) = limcan(&[
        "squash",
        "--graph",
        &fixture("k4.json"),
        "--pair",
        &fixture("k4_pair.json"),
        "--circuit",
        "e03:- e01:+",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["int_genus"], serde_json::json!([0, 1]));
}

#[test]
fn unknown_suite_is_an_input_error() {
    let (v, code) = limcan(&["verify", "--suite", "nope"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "input");
}

#[test]
fn passing_suite_exits_zero() {
    let (v, code) = limcan(&["verify", "--suite", "upmin-example"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["passed"], true);
}
