use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn censtab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_censtab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = censtab(&all);
    let v = serde_json::from_slice(&out.stdout).expect("stdout is JSON");
    (out.status.code().unwrap(), v)
}

#[test]
fn torsion_module_is_stable_from_one() {
    let m = data("z2.json");
    let (code, v) = json(&["check-stability", "--module", &m, "--N", "1", "--n-max", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["degrees"].as_array().unwrap().len(), 7);
    let (code, v) = json(&["check-stability", "--module", &m, "--N", "0", "--n-max", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["degrees"][1]["verdict"], "not-iso");
    assert_eq!(v["degrees"][1]["kernel"], serde_json::json!([0]));
}

#[test]
fn prd_and_dstep() {
    let m = data("z2.json");
    let (code, v) = json(&["prd", "--module", &m, "--N-max", "3", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["prd"], 1);
    let (code, v) = json(&["check-dstep", "--module", &m, "--d", "2", "--N", "2", "--n-max", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["window_start"], 1);
    let (code, _) = json(&["reduce-idempotent", "--module", &m, "--m", "0", "--N", "2", "--n", "4", "--d", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn counterexample_conditions_fail_with_witness() {
    let (code, v) = json(&["check-conditions", "--category", "counterexample", "--d", "2", "--n-max", "3"]);
    assert_eq!(code, 1);
    let w = &v["condition_ii"][0]["witness"];
    assert_eq!(w["alpha1"]["name"], "b1''·b1'");
    assert_eq!(w["alpha2"]["name"], "b2''·b2'");
    assert_eq!(w["beta1"]["name"], "b1");
    assert_eq!(w["beta2"]["name"], "b2");
    let human = censtab(&["check-conditions", "--category", "counterexample", "--d", "2", "--n-max", "3"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("α₁ = b1''·b1'"));
}

#[test]
fn relations_over_default_rings() {
    let (code, v) = json(&["check-relations", "--category", "fi", "--d", "2", "--m", "0", "--n", "3"]);
    assert_eq!(code, 0);
    let rings: Vec<&str> = v["generation"].as_array().unwrap().iter().map(|g| g["ring"].as_str().unwrap()).collect();
    assert_eq!(rings, ["F2", "F3", "Z"]);
    let (code, _) = json(&["check-relations", "--category", "plactic", "--alphabet", "1,2", "--m", "0", "--n", "3", "--ring", "F2"]);
    assert_eq!(code, 1);
}

#[test]
fn category_files_load() {
    let c = data("two_letter_plactic.json");
    let (code, v) = json(&["hom-stat", "--category", &c, "--n-max", "3"]);
    assert_eq!(code, 0);
    let sizes: Vec<u64> = v["hom_sizes"].as_array().unwrap().iter().map(|r| r["size"].as_u64().unwrap()).collect();
    // Knuth relations identify 2 of the 8 words of length three.
    assert_eq!(sizes, [1, 2, 4, 6, 1, 2, 4, 1, 2, 1]);
}

#[test]
fn snf_prints_diagonal() {
    let out = censtab(&["snf", "--matrix", "[[2,4],[6,8]]"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("D = diag(2,4)"));
    let (_, v) = json(&["snf", "--matrix", "[[2,4],[6,8]]", "--ring", "F2"]);
    assert_eq!(v["rank"], 0);
}

#[test]
fn json_is_deterministic() {
    let m = data("z2.json");
    let args = ["--format", "json", "check-stability", "--module", &m, "--N", "1", "--n-max", "4", "--cross-check"];
    assert_eq!(censtab(&args).stdout, censtab(&args).stdout);
    let (_, v) = json(&["check-stability", "--module", &m, "--N", "1", "--n-max", "2", "--timing"]);
    assert!(v.get("wall_time_ms").is_some());
}

#[test]
fn input_errors_exit_two() {
    let out = censtab(&["check-stability", "--module", &data("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("malformed.json") && err.contains("line 5"), "{err}");
    let out = censtab(&["prd", "--module", &data("bad_index.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("hom_index 5 out of range"));
    assert_eq!(censtab(&["hom-stat", "--category", "nope"]).status.code(), Some(2));
    assert_eq!(censtab(&["check-dstep", "--module", &data("z2.json"), "--d", "0"]).status.code(), Some(2));
}

#[test]
fn resource_cap_exits_three() {
    let (code, v) = json(&["hom-stat", "--category", "fi", "--n-max", "9", "--hom-cap", "500"]);
    assert_eq!(code, 3);
    assert_eq!(v["complete"], false);
    let (code, v) = json(&["--hom-cap", "10", "check-stability", "--module", &data("z2.json"), "--N", "3", "--n-max", "6"]);
    assert_eq!(code, 3);
    assert_eq!(v["complete"], false);
    assert!(v["stopped_by"].as_str().unwrap().contains("cap of 10"));
}
