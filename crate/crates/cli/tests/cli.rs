use std::path::PathBuf;
use std::process::{Command, Output};

use gamp_cli::format::{symbol_to_repr, SymbolRepr};
use gamp_cli::Scenario;
use gamp_core::amplitude_dga::mc_residual;
use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn gamp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gamp"))
        .args(args)
        .env_remove("GAMP_REPORT_VERBOSITY")
        .output()
        .expect("gamp runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_arg(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sign_character_passes() {
    let p = scenario("z2_sign_character.json");
    let out = gamp(&["--scenario", path_arg(&p), "run"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[pass] check_mc sign"));
    assert!(text.ends_with("outcome: pass\n"));
}

#[test]
fn failing_cochain_reports_replayable_witness() {
    let p = scenario("z2_failing.json");
    let out = gamp(&["--scenario", path_arg(&p), "--format", "json", "check", "mc", "a"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["outcome"], "fail");
    let witnesses = report["tasks"][0]["witnesses"].as_array().unwrap();
    assert_eq!(witnesses.len(), 1);
    assert_eq!(witnesses[0]["tuple"], serde_json::json!(["s", "s"]));

    // Recompute the residual at the reported tuple and compare.
    let s = Scenario::load(&p).unwrap();
    let a = s.cochain("a", "test").unwrap();
    let g = a.group();
    let tuple: Vec<usize> = witnesses[0]["tuple"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| g.index_of(l.as_str().unwrap()).unwrap())
        .collect();
    let expected = symbol_to_repr(mc_residual(a).unwrap().value(&tuple));
    let reported: SymbolRepr = serde_json::from_value(witnesses[0]["difference"].clone()).unwrap();
    assert_eq!(reported, expected);
}

#[test]
fn representation_and_cocycle_subcommands() {
    let p = scenario("z2_constant_family.json");
    let ok = gamp(&["--scenario", path_arg(&p), "check", "representation", "c_minus_one"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = gamp(&["--scenario", path_arg(&p), "check", "representation", "c_two"]);
    assert_eq!(bad.status.code(), Some(1));
    let mult = gamp(&["--scenario", path_arg(&p), "check", "cocycle", "--multiplicative", "c_i"]);
    assert_eq!(mult.status.code(), Some(1));

    let p = scenario("z2_additive.json");
    let add = gamp(&["--scenario", path_arg(&p), "check", "cocycle", "--additive", "S"]);
    assert_eq!(add.status.code(), Some(0));
    let add = gamp(&["--scenario", path_arg(&p), "check", "cocycle", "--additive", "not_cocycle"]);
    assert_eq!(add.status.code(), Some(1));
    let both = gamp(&[
        "--scenario",
        path_arg(&p),
        "check",
        "cocycle",
        "--additive",
        "S",
        "--multiplicative",
        "x",
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn check_dga_subcommand() {
    let p = scenario("z3_rotation.json");
    let out = gamp(&["--scenario", path_arg(&p), "--format", "json", "check", "dga"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["tasks"][0]["details"]["checks"].as_u64().unwrap() > 10);
}

#[test]
fn solve_mc_lists_every_order() {
    let p = scenario("z2_extend.json");
    let out = gamp(&[
        "--scenario",
        path_arg(&p),
        "--format",
        "json",
        "solve",
        "mc",
        "--order",
        "4",
        "--p0",
        "p0",
        "--p1",
        "p1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    let details = &report["tasks"][0]["details"];
    let orders: Vec<u64> = details["orders"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| o["order"].as_u64().unwrap())
        .collect();
    assert_eq!(orders, vec![1, 2, 3, 4]);
    assert_eq!(details["orders"][0]["status"], "given");
    assert_eq!(details["residual_zero"], true);
    assert_eq!(details["omega"]["degree"], 1);
}

#[test]
fn solve_rigidity_from_cochain_and_from_p1() {
    let p = scenario("z2_constant_family.json");
    let out = gamp(&["--scenario", path_arg(&p), "solve", "rigidity", "--order", "2", "--cochain", "c_minus_one"]);
    assert_eq!(out.status.code(), Some(0));

    let p = scenario("z2_unit_rigidity.json");
    let out = gamp(&["--scenario", path_arg(&p), "--format", "json", "solve", "rigidity", "--order", "3", "--p1", "p1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert!(report["tasks"][0]["details"]["extension_orders"].is_array());

    let neither = gamp(&["--scenario", path_arg(&p), "solve", "rigidity", "--order", "3"]);
    assert_eq!(neither.status.code(), Some(2));
}

#[test]
fn cohomology_subcommand_reports_dimensions() {
    let p = scenario("trivial_z2.json");
    let out = gamp(&[
        "--scenario",
        path_arg(&p),
        "--format",
        "json",
        "cohomology",
        "--xi-degree",
        "1",
        "--cochain-degree",
        "0",
        "--x-degree",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let d = &json(&out)["tasks"][0]["details"];
    assert_eq!(d["h_dim"], 6);
    assert_eq!(d["h0_character_formula"], 6);
    assert_eq!(d["scope"], "exact");
}

#[test]
fn timing_only_on_request() {
    let p = scenario("z2_sign_character.json");
    let plain = gamp(&["--scenario", path_arg(&p), "report"]);
    assert!(!String::from_utf8_lossy(&plain.stdout).contains("elapsed_ms"));
    let timed = Command::new(env!("CARGO_BIN_EXE_gamp"))
        .args(["--scenario", path_arg(&p), "report"])
        .env("GAMP_REPORT_VERBOSITY", "timing")
        .output()
        .unwrap();
    assert!(json(&timed)["tasks"][0]["elapsed_ms"].is_u64());
}

#[test]
fn input_errors_exit_two() {
    for f in ["missing_action_entry.json", "bad_version.json", "malformed.json", "unnormalized.json", "unknown_reference.json"] {
        let p = fixture(f);
        let out = gamp(&["--scenario", path_arg(&p), "run"]);
        assert_eq!(out.status.code(), Some(2), "{f}");
        assert!(!out.stderr.is_empty(), "{f}");
    }
    let missing = gamp(&["run"]);
    assert_eq!(missing.status.code(), Some(2));
    let p = scenario("z2_sign_character.json");
    let unknown = gamp(&["--scenario", path_arg(&p), "check", "mc", "nope"]);
    assert_eq!(unknown.status.code(), Some(2));
    let absent = gamp(&["--scenario", "/nonexistent/scenario.json", "run"]);
    assert_eq!(absent.status.code(), Some(2));
}

#[test]
fn missing_action_entry_names_the_element() {
    let p = fixture("missing_action_entry.json");
    let out = gamp(&["--scenario", path_arg(&p), "run"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("missing map for element \"s\""), "{err}");
}

#[test]
fn referenced_files_contribute_to_the_digest() {
    let s = Scenario::load(&scenario("z2_extend.json")).unwrap();
    assert_eq!(s.sha256.len(), 64);
    assert!(s.cochains.contains_key("p0"));
    let again = Scenario::load(&scenario("z2_extend.json")).unwrap();
    assert_eq!(s.sha256, again.sha256);
}
