use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_switchquest"))
        .args(args)
        .env_remove("SWITCHQUEST_SEED")
        .env_remove("SWITCHQUEST_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let out = run(args, stdin);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn generated_pyramid_pipes_into_solve() {
    let g = ok(&["gen", "pyramid", "3"], "");
    let r = json(&ok(&["solve", "--k", "2", "--goal", "path"], &g));
    assert_eq!(r["value"], 2);
    assert!(r["optimal_first_moves"].as_array().unwrap().iter().any(|m| m == &serde_json::json!(["v1_1", "v3_2"])));
    assert!(r["stats"]["states"].as_u64().unwrap() > 0);
}

#[test]
fn export_round_trips_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("g.json");
    ok(&["gen", "gpy_complete", "3", "2", "-o", file.to_str().unwrap()], "");
    let original = std::fs::read_to_string(&file).unwrap();
    assert_eq!(ok(&["export", "--json", "-i", file.to_str().unwrap()], ""), original);
    let dot = ok(&["export", "--dot", "-i", file.to_str().unwrap()], "");
    assert!(dot.starts_with("digraph"));
}

#[test]
fn random_generation_follows_the_seed() {
    let a = ok(&["gen", "random_dag", "8", "3", "2", "--seed", "42"], "");
    let b = ok(&["gen", "random_dag", "8", "3", "2", "--seed", "42"], "");
    let c = ok(&["gen", "random_dag", "8", "3", "2", "--seed", "43"], "");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn reduce_and_path_lengths() {
    let g = ok(&["gen", "hl", "2", "1"], "");
    assert_eq!(json(&ok(&["lp"], &g))["length"], 2);
    let r = json(&ok(&["reduce", "--mode", "multi"], &g));
    assert!(r["map"].as_object().unwrap().contains_key("x1"));
    assert!(r["graph"]["vertices"].is_array());
    let cyclic = ok(&["gen", "random_cyclic", "6", "2", "2", "--seed", "5"], "");
    let glp = json(&ok(&["glp"], &cyclic));
    let solved = json(&ok(&["solve", "--k", "1", "--goal", "path"], &cyclic));
    assert_eq!(glp["length"], solved["value"]);
}

#[test]
fn match_and_eval() {
    let g = ok(&["gen", "tree", "2", "4"], "");
    let m = json(&ok(
        &["match", "--k", "3", "--goal", "path", "--questioner", "tree_levels", "--adversary", "tree_min_subtree"],
        &g,
    ));
    assert_eq!(m["rounds"], 2);
    assert_eq!(m["transcript"].as_array().unwrap().len(), 2);
    let py = ok(&["gen", "pyramid", "3"], "");
    let w = json(&ok(&["eval", "--k", "1", "--goal", "path", "--worst-case", "--questioner", "follow_flow"], &py));
    assert_eq!((w["rounds"].as_u64(), w["exhaustive"].as_bool()), (Some(3), Some(true)));
    let b = json(&ok(
        &["eval", "--k", "2", "--goal", "sink", "--best-response", "--adversary", "pyramid_shorter_side"],
        &py,
    ));
    assert_eq!(b["rounds"], 2);
}

#[test]
fn match_against_an_assignment_file() {
    let dir = tempfile::tempdir().unwrap();
    let g_file = dir.path().join("g.json");
    let a_file = dir.path().join("a.json");
    ok(&["gen", "pyramid", "2", "-o", g_file.to_str().unwrap()], "");
    std::fs::write(&a_file, r#"{"v1_1": "e1", "v2_2": "e5"}"#).unwrap();
    let args = [
        "match", "-i", g_file.to_str().unwrap(), "--k", "1", "--goal", "path", "--questioner", "follow_flow",
        "--assignment", a_file.to_str().unwrap(),
    ];
    let m = json(&ok(&args, ""));
    assert_eq!(m["rounds"], 2);

    std::fs::write(&a_file, r#"{"v1_1": "e0"}"#).unwrap();
    let out = run(&args, "");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("v2_1"));
}

#[test]
fn formula_output() {
    let f = json(&ok(&["formula", "tree_rounds", "2", "4", "3"], ""));
    assert_eq!(f, serde_json::json!({"name": "tree_rounds", "params": [2, 4, 3], "value": 2, "kind": "exact"}));
    assert_eq!(run(&["formula", "tree_rounds", "2"], "").status.code(), Some(2));
}

#[test]
fn verify_suite_exit_codes() {
    let out = run(&["verify", "tree", "--budget", "small"], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(report["passed"], true);
    assert!(report["total"].as_u64().unwrap() > 0);
    assert_eq!(run(&["verify", "nope"], "").status.code(), Some(2));
    assert_eq!(run(&["verify", "hl", "--budget", "huge"], "").status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_with_two() {
    assert_eq!(run(&["solve", "--k", "1", "--goal", "sink"], "{\"name\": 3}").status.code(), Some(2));
    assert_eq!(run(&["gen", "pyramid"], "").status.code(), Some(2));
    assert_eq!(run(&["gen", "hexagon", "3"], "").status.code(), Some(2));
    assert_eq!(run(&["bogus"], "").status.code(), Some(2));
    let g = ok(&["gen", "pyramid", "2"], "");
    let out = run(&["match", "--k", "1", "--goal", "sink", "--questioner", "nope", "--adversary", "all_left"], &g);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown questioner"));
}
