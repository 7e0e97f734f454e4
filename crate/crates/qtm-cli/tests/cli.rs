//! End-to-end checks of the binary: JSON output shapes, exit codes, and
//! round-tripping of the emitted formats.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn qtm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("qtm-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

#[test]
fn trace_of_hole_surrounding_loop() {
    let out = qtm(&["trace", "--catalog", "one-holed-torus", "--loop", "gamma"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["state_count"], 9);
    assert_eq!(v["terms"].as_array().unwrap().len(), 9);
    assert_eq!(v["classification"], "almost-peripheral(1)");
    assert_eq!(v["v_gamma"]["a"], 2);
}

#[test]
fn trace_is_deterministic() {
    let a = qtm(&["trace", "--catalog", "one-holed-genus-2", "--loop", "eta"]);
    let b = qtm(&["trace", "--catalog", "one-holed-genus-2", "--loop", "eta"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn teschner_verify_recorded_witness() {
    let out = qtm(&[
        "teschner-verify",
        "--catalog",
        "one-holed-torus",
        "--triple",
        "gamma,eta,eta",
        "--v1",
        "a:1,b:1,d:2",
        "--v2",
        "a:-1,b:-1,c:-2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["TR1"], true);
    assert_eq!(v["TR2"], true);
    assert_eq!(v["TR3"], true);
    assert_eq!(v["TR4"], "coincide");
    assert_eq!(v["pairing_v1_v2"], -4);
}

#[test]
fn teschner_verify_weak_with_tr5() {
    let out = qtm(&[
        "teschner-verify",
        "--catalog",
        "one-holed-genus-2",
        "--triple",
        "gamma,eta,sigma",
        "--v1",
        "a1:-1,b1:-1,c1:-2",
        "--v2",
        "a1:1,a2:2,b1:1,b2:2,c1p:2,c2:2,d1:2,d2:2,e2:2",
        "--tr5-triple",
        "eta,zeta,sigma",
        "--tr5-v1",
        "a1:-1,b1:-1,d1:-2",
        "--tr5-v2",
        "a2:2,b2:2,c2:2,d2:2,e2:2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["TR1"], true);
    assert_eq!(v["TR5"], true);
    assert_eq!(v["pairing_v1_v2"], 4);
}

#[test]
fn teschner_verify_bad_witness_exits_1() {
    let out = qtm(&[
        "teschner-verify",
        "--catalog",
        "one-holed-torus",
        "--triple",
        "gamma,eta,eta",
        "--v1",
        "a:1",
        "--v2",
        "b:1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn teschner_solve_finds_witnesses() {
    let out = qtm(&[
        "teschner-solve",
        "--catalog",
        "one-holed-torus",
        "--triple",
        "gamma,eta,eta",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(!v.as_array().unwrap().is_empty());
}

#[test]
fn commute_check_peripheral() {
    let out = qtm(&[
        "commute-check",
        "--catalog",
        "once-punctured-torus",
        "--loops",
        "peripheral,nonsep",
    ]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["strongly_commute"], "verified");
    assert_eq!(v["commute"], true);
}

#[test]
fn flip_verify_catalog_mode() {
    let out = qtm(&[
        "flip-verify",
        "--catalog",
        "once-punctured-torus",
        "--loop",
        "nonsep",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["natural"], true);
    assert_eq!(v["arc"], "3");
}

#[test]
fn catalog_list_and_emit_round_trip() {
    let out = qtm(&["catalog", "list"]);
    assert!(out.status.success());
    let names = stdout_json(&out);
    assert!(names
        .as_array()
        .unwrap()
        .iter()
        .any(|n| n == "one-holed-torus"));

    // emitted surface is accepted by surface-validate
    let out = qtm(&["catalog", "get", "one-holed-torus", "--emit", "surface"]);
    assert!(out.status.success());
    let surface_contents = String::from_utf8(out.stdout).unwrap();
    let spath = temp_file("oht-surface.json", &surface_contents);
    let out = qtm(&["surface-validate", "--surface", spath.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["ok"], true);

    // emitted loop feeds back into trace
    let out = qtm(&[
        "catalog",
        "get",
        "one-holed-torus",
        "--emit",
        "loop",
        "--loop",
        "gamma",
    ]);
    assert!(out.status.success());
    let lpath = temp_file("oht-gamma.json", &String::from_utf8(out.stdout).unwrap());
    let out = qtm(&["trace", "--loop", lpath.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_json(&out)["state_count"], 9);
}

#[test]
fn invalid_input_exits_2() {
    let out = qtm(&["trace", "--catalog", "no-such-entry", "--loop", "gamma"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn self_folded_loop_exits_3() {
    let surface = r#"{
        "arcs": ["i", "j", "k", "l"],
        "boundary_arcs": ["k", "l"],
        "triangles": [
            {"self_folded": {"inner": "i", "outer": "j"}},
            {"sides": ["j", "k", "l"]}
        ]
    }"#;
    let spath = temp_file("self-folded.json", surface);
    // a "loop" that claims to pass through the self-folded triangle
    let lp = format!(
        r#"{{"surface": "{}", "segments": [
            {{"triangle": 0, "in": "i", "out": "j"}},
            {{"triangle": 1, "in": "j", "out": "i"}}
        ]}}"#,
        spath.display()
    );
    let lpath = temp_file("self-folded-loop.json", &lp);
    let out = qtm(&["trace", "--loop", lpath.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn trace_output_feeds_flip_verify() {
    let surface = qtm(&["catalog", "get", "once-punctured-torus", "--emit", "surface"]);
    let spath = temp_file("opt-surface.json", &String::from_utf8(surface.stdout).unwrap());
    let after = qtm(&["trace", "--catalog", "once-punctured-torus", "--loop", "nonsep"]);
    let apath = temp_file("opt-after.json", &String::from_utf8(after.stdout).unwrap());
    let before = qtm(&[
        "trace",
        "--catalog",
        "once-punctured-torus-flipped",
        "--loop",
        "nonsep",
    ]);
    let bpath = temp_file("opt-before.json", &String::from_utf8(before.stdout).unwrap());
    let out = qtm(&[
        "flip-verify",
        "--surface",
        spath.to_str().unwrap(),
        "--arc",
        "3",
        "--trace-after",
        apath.to_str().unwrap(),
        "--trace-before",
        bpath.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(stdout_json(&out)["natural"], true);
}
