//! End-to-end runs of the `cde` binary: JSON/CSV outputs, exit codes,
//! determinism of seeded sweeps.

use std::path::Path;
use std::process::{Command, Output};

use cde_core::classify::{normal_form_instance, NormalFormLabel, NormalFormParams};
use serde_json::Value;

fn cde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cde"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classify_reports_the_swallowtail_flow_box() {
    let spec = normal_form_instance(NormalFormLabel::SwallowtailFlowBox, &NormalFormParams::default())
        .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("st.json");
    std::fs::write(&path, spec.to_json_string()).unwrap();
    let out = cde(&["classify", "--spec", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["label"], "swallowtail/flow_box");
    assert_eq!(v["generic"], true);
}

#[test]
fn demo_writes_the_nerve_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("nerve");
    let out = cde(&["demo", "zeeman_nerve", "--out", out_dir.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["label"], "cusp/flow_box");

    let near = |eq: &Value, x: f64, a: f64| {
        let c = eq["chart"].as_array().unwrap();
        (c[0].as_f64().unwrap() - x).abs() < 1e-8 && (c[1].as_f64().unwrap() - a).abs() < 1e-8
    };
    let eqs = v["equilibria"].as_array().unwrap();
    assert_eq!(eqs.len(), 2);
    let folded = eqs.iter().find(|e| near(e, 0.5, -0.75)).expect("folded saddle");
    assert_eq!(folded["on_singular"], true);
    let regular = eqs.iter().find(|e| near(e, 1.0, -1.0)).expect("regular equilibrium");
    assert_eq!(regular["on_singular"], false);

    let csv = std::fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    assert!(csv.starts_with("t,x,a,lift_x,lift_a,lift_b,det_proj,event_flag"));
    assert!(csv.lines().count() > 10);
    assert!(out_dir.join("events.json").exists());
    assert!(out_dir.join("manifest.json").exists());
}

#[test]
fn umbilic_jump_search_comes_back_empty() {
    let out = cde(&["jump-search", "--family", "hyperbolic_umbilic", "--samples", "50"]);
    let v = stdout_json(&out);
    assert_eq!(v["admissible_points"], 0);
    assert_eq!(v["samples"], 50);
    assert_eq!(v["examples"].as_array().unwrap().len(), 0);
}

#[test]
fn seeded_sampling_is_reproducible_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let (d1, d2, d3) = (dir.path().join("a"), dir.path().join("b"), dir.path().join("c"));
    for (d, seed) in [(&d1, "9"), (&d2, "9"), (&d3, "10")] {
        let out = cde(&[
            "strata-sample",
            "--family",
            "swallowtail",
            "--samples",
            "25",
            "--seed",
            seed,
            "--out",
            d.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let read = |d: &Path| std::fs::read(d.join("strata.csv")).unwrap();
    assert_eq!(read(&d1), read(&d2), "same seed, same bytes");
    assert_ne!(read(&d1), read(&d3), "different seed, different draws");
    let csv = String::from_utf8(read(&d1)).unwrap();
    assert!(csv.starts_with("family,stratum,x,a,b,c"));
    assert!(csv.contains(",fold,"));
}

#[test]
fn a_fold_crossing_shows_up_as_a_jump_event() {
    let dir = tempfile::tempdir().unwrap();
    let out = cde(&[
        "simulate",
        "--model",
        "zeeman_heartbeat:0.45",
        "--horizon",
        "2.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert!(v["events"].as_u64().unwrap() >= 1);
    let events = std::fs::read_to_string(dir.path().join("events.json")).unwrap();
    assert!(events.contains("Jump"), "expected a jump event, got {events}");
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    let flagged = csv
        .lines()
        .skip(1)
        .filter(|l| !l.ends_with(",0"))
        .count();
    assert!(flagged >= 1, "some row must carry an event flag");
}

#[test]
fn tolerance_dot_spelling_reaches_the_manifest() {
    let out = cde(&["classify", "--model", "fold/source", "--tol.newton", "1e-9"]);
    let v = stdout_json(&out);
    assert_eq!(v["manifest"]["tolerances"]["newton"], 1e-9);
    assert_eq!(v["label"], "fold/source");
}

#[test]
fn invalid_inputs_exit_2() {
    let missing = cde(&["classify", "--spec", "/no/such/file.json"]);
    assert_eq!(code(&missing), 2);

    let unknown_model = cde(&["simulate", "--model", "zeeman_hiccup"]);
    assert_eq!(code(&unknown_model), 2);
    assert!(String::from_utf8_lossy(&unknown_model.stderr).contains("zeeman_hiccup"));

    let bad_eps = cde(&["eps-compare", "--model", "zeeman_nerve", "--epsilons", "0.1,-0.5"]);
    assert_eq!(code(&bad_eps), 2);

    let bad_tol = cde(&["classify", "--model", "fold/source", "--tol.bogus", "1"]);
    assert_eq!(code(&bad_tol), 2);

    let no_source = cde(&["classify"]);
    assert_eq!(code(&no_source), 2);
}

#[test]
fn malformed_spec_files_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{ "family": "heptagon", "g": [] }"#).unwrap();
    let out = cde(&["classify", "--spec", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("heptagon"));
}
