//! End-to-end runs of the `liouville` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("liouville-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn construct_then_verify() {
    let path = scratch("construct.json");
    let o = run(&[
        "construct",
        "--level",
        "3",
        "--show",
        "12",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verified to level 3"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let path = scratch("tamper.json");
    let o = run(&[
        "certify",
        "liouville(10)",
        "--level",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["subjects"][0]["witnesses"][2]["q"] = serde_json::Value::String("999999".into());
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).starts_with("error: InvalidWitness:"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn metadata_edits_do_not_matter() {
    let path = scratch("meta.json");
    let o = run(&[
        "split-sum",
        "1/3",
        "--level",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["metadata"]["generated_at"] = serde_json::Value::String("unix:0".into());
    std::fs::write(&path, doc.to_string()).unwrap();
    let o = run(&["verify", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("xi: verified to level 3"));
    assert!(stdout(&o).contains("eta: verified to level 3"));
}

#[test]
fn split_prod_round_trip() {
    let path = scratch("prod.json");
    let o = run(&[
        "split-prod",
        "2",
        "--level",
        "3",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(run(&["verify", path.to_str().unwrap()]).status.success());
}

#[test]
fn sqrt2_is_not_certified_past_level_3() {
    let o = run(&["certify", "sqrt(2)", "--level", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: WitnessSearchExhausted:"));
}

#[test]
fn continued_fraction_listing() {
    let o = run(&["cfrac", "sqrt(2)", "--depth", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[1; 2, 2, 2, 2]"));
    assert!(out.contains("4: 41/29"));
}

#[test]
fn independence_verdicts() {
    let o = run(&["expindep", "--mode", "linear", "z", "z^2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("independent"));
    let o = run(&["expindep", "--mode", "algebraic", "z", "2z + 1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dependent"), "{}", stdout(&o));
}

#[test]
fn burger_composition() {
    let o = run(&["burger", "--minpoly", "z^2 - 2", "--compose", "x + y"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("x^2 + 2*x*y + y^2 - 2"));
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "1/3"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let o = run(&["certify", "1/3", "--level", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error: "));
    let o = run(&["verify", "/nonexistent/cert.json"]);
    assert_eq!(o.status.code(), Some(1));
}
