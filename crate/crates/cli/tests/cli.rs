use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const TORUS: &str = r#"{"variant":"diagonal","freeWeights":[[-1],[4]],"torsion":[]}"#;
const SL2: &str = r#"{"variant":"rooted","kind":"SL","n":2}"#;
const F_P2: &str = "x(1,1)*x(1,2)*x(1,3)*x(1,4)*x(2,4)\n";

fn fixture_dir(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vilab-cli-{}-{test}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn vilab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vilab")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn invariants_lists_the_torus_generators() {
    let dir = fixture_dir("invariants");
    let g = write(&dir, "torus.json", TORUS);
    let out = vilab(&["invariants", "--ring", "2x2@p2", "--group", &g, "--max-deg", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["count"], 10);
    assert!(v["generators"].as_array().unwrap().iter().all(|m| m["rowDegrees"] == serde_json::json!([4, 1])));
}

#[test]
fn member_reports_nonmember_with_residual() {
    let dir = fixture_dir("member");
    let g = write(&dir, "torus.json", TORUS);
    let f = write(&dir, "f.txt", F_P2);
    let out = vilab(&["member", "--ring", "2x4@p2", "--group", &g, "--poly", &f]);
    assert_eq!(out.status.code(), Some(1));
    let cert = &json(&out)["results"][0]["certificate"];
    assert_eq!(cert["verdict"], "nonmember");
    assert_eq!(cert["degree"], 5);
    assert!(!cert["residualTerms"].as_array().unwrap().is_empty());
}

#[test]
fn member_with_explicit_generators() {
    let dir = fixture_dir("member-gens");
    let gens = write(&dir, "gens.txt", "x(1,1)*x(2,2) - x(1,2)*x(2,1)\n");
    let f = write(&dir, "f.txt", "x(1,2)*x(2,3) - x(1,3)*x(2,2)\n");
    let out = vilab(&["member", "--ring", "2x3@p0", "--gens", &gens, "--poly", &f]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["results"][0]["certificate"]["verdict"], "member");
    assert_eq!(v["results"][0]["verified"], true);
}

#[test]
fn proot_finds_a_level_and_cap_is_indeterminate() {
    let dir = fixture_dir("proot");
    let g = write(&dir, "torus.json", TORUS);
    let f = write(&dir, "f.txt", F_P2);
    let out = vilab(&["proot", "--ring", "2x4@p2", "--group", &g, "--poly", &f, "--m-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert_eq!(r["found"], true);
    assert_eq!(r["verified"], true);
    let capped = vilab(&["proot", "--ring", "2x4@p2", "--group", &g, "--poly", &f, "--max-products", "10"]);
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn deltapow_minors_under_sl2() {
    let dir = fixture_dir("deltapow");
    let g = write(&dir, "sl.json", SL2);
    let f = write(
        &dir,
        "m.txt",
        "x(1,1)*x(2,2) - x(1,2)*x(2,1)\nx(1,1)*x(2,3) - x(1,3)*x(2,1)\nx(1,2)*x(2,3) - x(1,3)*x(2,2)\n",
    );
    let out = vilab(&["deltapow", "--ring", "2x3@p5", "--group", &g, "--poly", &f]);
    assert_eq!(out.status.code(), Some(0));
    for r in json(&out)["results"].as_array().unwrap() {
        assert_eq!(r["level"], 0);
    }
}

#[test]
fn hweight_value() {
    let out = vilab(&["hweight", "--weight", "2,1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["h"], 4);
    let neg = vilab(&["hweight", "--weight", "-1,0,1"]);
    assert_eq!(json(&neg)["h"], -4);
}

#[test]
fn span_and_phiprime() {
    let dir = fixture_dir("span");
    let f = write(&dir, "m.txt", "x(1,1)*x(2,2) - x(1,2)*x(2,1)\n");
    let out = vilab(&["span", "--ring", "2x3@p5", "--poly", &f]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"][0]["dim"], 3);
    let out = vilab(&["phiprime", "--ring", "2x3@p5", "--poly", &f]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert_eq!(r["level"], 2);
    assert_eq!(r["terms"].as_array().unwrap().len(), 1);
}

#[test]
fn coverage_default_pairs_for_sl() {
    let dir = fixture_dir("coverage");
    let g = write(&dir, "sl.json", SL2);
    let out = vilab(&["coverage", "--ring", "2x3@p5", "--group", &g]);
    assert_eq!(out.status.code(), Some(0));
    let recs = json(&out)["coverage"].as_array().unwrap().clone();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["covered"] == true));
}

#[test]
fn coverage_with_explicit_ugens() {
    let dir = fixture_dir("coverage-sp");
    let g = write(&dir, "sp.json", r#"{"variant":"rooted","kind":"Spsplit","n":2}"#);
    let u = write(&dir, "u.txt", "# symplectic pairing\nsp12 @ 1,1,0\n");
    let out = vilab(&["coverage", "--ring", "2x3@p5", "--group", &g, "--ugens", &u]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["coverage"][0]["covered"], true);
}

#[test]
fn scenario_json_is_deterministic_and_text_works() {
    let a = vilab(&["scenario", "torus-p2", "--emit", "json"]);
    let b = vilab(&["scenario", "torus-p2", "--emit", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["summary"]["status"], "pass");
    assert!(v["queries"].as_array().unwrap().iter().all(|q| q.get("elapsedMs").is_none()));
    let t = vilab(&["scenario", "classical-sl", "--emit", "text"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(String::from_utf8(t.stdout).unwrap().contains("summary: Pass"));
}

#[test]
fn scenario_list() {
    let out = vilab(&["scenario", "list"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["scenarios"].as_array().unwrap().len(), 8);
}

#[test]
fn input_errors_exit_3() {
    let dir = fixture_dir("errors");
    let g = write(&dir, "torus.json", TORUS);
    let f = write(&dir, "f.txt", F_P2);
    let bad = write(&dir, "bad.txt", "x(1,1) +\n");
    let bad_group = write(
        &dir,
        "mod1.json",
        r#"{"variant":"diagonal","freeWeights":[],"torsion":[{"modulus":1,"weights":[1,1]}]}"#,
    );
    for args in [
        vec!["member", "--ring", "2x4@p4", "--group", &g, "--poly", &f],
        vec!["member", "--ring", "2x4@p2", "--group", &g, "--poly", &bad],
        vec!["member", "--ring", "2x4@p2", "--group", &bad_group, "--poly", &f],
        vec!["member", "--ring", "2x3@p2", "--group", &g, "--poly", &f],
        vec!["member", "--ring", "2x4@p2", "--poly", &f],
        vec!["member", "--ring", "2x4@p2", "--bogus"],
        vec!["scenario", "no-such-scenario"],
        vec!["hweight", "--weight", "a,b"],
    ] {
        let out = vilab(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let e = vilab(&["span", "--ring", "2x4@p2", "--poly", &bad]);
    assert!(String::from_utf8(e.stderr).unwrap().contains("1:9"));
}
