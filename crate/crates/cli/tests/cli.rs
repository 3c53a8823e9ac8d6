use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toric-gcd"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn beta_of_anticanonical_along_pulled_back_boundary() {
    let fan = data("data/p1xp1.json");
    let v = run_json(&[
        "beta",
        "--fan",
        fan.to_str().unwrap(),
        "--blowup-center",
        "1,2",
        "--L",
        "anticanonical",
        "--F",
        "pullback:3",
    ]);
    assert_eq!(v["beta"], "19/21");
    assert_eq!(v["gamma_eff"], "2");
    assert!(v["pieces"].as_array().is_some_and(|p| !p.is_empty()));
}

#[test]
fn builtin_fan_names_match_json_files() {
    let fan = data("data/p1xp1.json");
    let from_file = run(&["gamma-eff", "--fan", fan.to_str().unwrap(), "--blowup-center", "1,2", "--L", "anticanonical", "--F", "exceptional"]);
    let builtin = run(&["gamma-eff", "--fan", "p1xp1", "--blowup-center", "1,2", "--L", "anticanonical", "--F", "exceptional"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, builtin.stdout);
}

#[test]
fn non_primitive_ray_is_a_validation_error() {
    let fan = data("data/non_primitive.json");
    let out = run(&["fan-validate", "--fan", fan.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["code"], "NonPrimitiveRay");
    assert_eq!(err["ray"], serde_json::json!([2, 0]));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["beta", "--fan", "p2"]).status.code(), Some(2));
    assert_eq!(run(&["fan-validate", "--fan", "p2", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["examples", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn divisor_terms_needing_a_blowup_are_rejected() {
    let out = run(&["beta", "--fan", "p2", "--L", "anticanonical", "--F", "exceptional"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["code"], "BlowupRequired");
}

#[test]
fn examples_match_golden_files() {
    for name in ["p2-point", "p1xp1-point", "p1xp1-gcd"] {
        let out = run(&["examples", name]);
        assert!(out.status.success());
        let golden = std::fs::read_to_string(data(&format!("golden/{name}.json"))).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), golden, "{name}");
    }
}

#[test]
fn example_values() {
    let p2 = run_json(&["examples", "p2-point"]);
    let betas: Vec<&str> = p2["cases"].as_array().unwrap().iter().map(|c| c["beta"].as_str().unwrap()).collect();
    assert_eq!(betas, ["2/3", "4/3", "2"]);

    let square = run_json(&["examples", "p1xp1-point", "--a", "1", "--b", "1"]);
    assert_eq!(square["beta"], "1");
    assert_eq!(square["matches"], true);

    let gcd = run_json(&["examples", "p1xp1-gcd"]);
    assert_eq!(gcd["gamma"], "21/19");
    assert_eq!(gcd["delta"], "2/19");
    for d in gcd["per_divisor"].as_array().unwrap() {
        assert_eq!(d["beta"], "19/21");
    }
    assert_eq!(gcd["matches"], true);
}

#[test]
fn gcd_bound_report() {
    let v = run_json(&["gcd-bound", "--fan", "p1xp1", "--blowup-center", "1,2", "--epsilon", "1/100"]);
    assert_eq!(v["delta"], "2/19");
    assert_eq!(v["constant_term"], "unspecified-by-theory");
    // (δ+ε)/((1+δ+ε)(r−1)) with δ = 2/19, ε = 1/100, r = 2
    assert_eq!(v["coeff_height"], "219/2119");
    assert_eq!(v["coeff_weil"], "1900/2119");
}

#[test]
fn gcd_check_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("rows.csv");
    let v = run_json(&["gcd-check", "--grid", "6", "--csv", csv.to_str().unwrap()]);
    let samples = v["sweep"]["samples"].as_u64().unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,beta,lhs,rhs,excess,z_suspect"));
    assert_eq!(lines.count() as u64, samples);
    assert_eq!(v["sweep"]["violations"], 0);
}

#[test]
fn polytope_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("p.svg");
    let v = run_json(&["polytope", "--fan", "p2", "--divisor", "2*prime:0", "--svg", svg.to_str().unwrap()]);
    assert_eq!(v["volume"], "2");
    // lattice points of 2·(standard triangle)
    assert_eq!(v["lattice_point_count"], 6);
    let picture = std::fs::read_to_string(svg).unwrap();
    assert!(picture.starts_with("<svg") && picture.contains("<polygon"));
}

#[test]
fn output_is_byte_deterministic() {
    let args = ["gcd-check", "--grid", "8", "--random", "20", "--seed", "7", "--places", "inf,2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["blowup", "--fan", "p2", "--center", "0,2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
