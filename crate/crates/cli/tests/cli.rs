use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discrete-gb"))
        .args(args)
        .env_remove("DISCRETE_GB_SEED")
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn chi_routes_agree() {
    let v = json(&["chi", "octahedron"]);
    assert_eq!(v["agree"], true);
    let methods = v["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 3);
    assert!(methods.iter().all(|m| m["chi"] == 2));
    let v = json(&["chi", "cycle:7", "--method", "curvature"]);
    assert_eq!(v["methods"][0]["chi"], 0);
}

#[test]
fn curvature_strings_are_exact() {
    let v = json(&["curvature", "icosahedron"]);
    assert_eq!(v["curvature"]["0"], "1/6");
    assert_eq!(v["curvature"]["total"], "2");
    let out = run(&["curvature", "path:3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "vertex,curvature\n0,1/2\n1,0\n2,1/2\ntotal,1\n");
}

#[test]
fn edge_list_and_json_files() {
    let edges = scratch("square.txt", "# a square\n0 1\n1 2\n2 3\n3 0\n");
    let v = json(&["chi", edges.to_str().unwrap()]);
    assert_eq!(v["methods"][0]["chi"], 0);
    let js = scratch("k3.json", r#"{"n": 3, "edges": [[0,1],[1,2],[0,2]]}"#);
    let v = json(&["curvature", js.to_str().unwrap()]);
    assert_eq!(v["curvature"]["2"], "1/3");
    let bad = scratch("bad.txt", "0 1\n1 x\n");
    let out = run(&["chi", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn generate_round_trips_through_a_file() {
    let out = run(&["generate", "er:25:0.3@4", "--edges"]);
    let path = scratch("er.txt", &String::from_utf8(out.stdout).unwrap());
    let from_file = json(&["chi", path.to_str().unwrap(), "--method", "cliques"]);
    let from_spec = json(&["chi", "er:25:0.3@4", "--method", "cliques"]);
    assert_eq!(from_file["methods"][0]["chi"], from_spec["methods"][0]["chi"]);
}

#[test]
fn index_with_function_file() {
    let f = scratch("f.txt", "0 0.5\n1 2\n2 -1\n3 7\n4 3.25\n");
    let v = json(&["index", "cycle:5", "--function", f.to_str().unwrap()]);
    assert_eq!(v["sum_index"], 0);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    let tie = scratch("tie.txt", "0 1\n1 1\n2 3\n3 4\n4 5\n");
    assert_eq!(run(&["index", "cycle:5", "--function", tie.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn expectation_marks_high_degree_vertices_skipped() {
    let v = json(&["expectation", "star:31", "--samples", "50", "--exact"]);
    let rows = v["vertices"].as_array().unwrap();
    assert!(rows[0]["skipped"].as_str().unwrap().contains("degree 30"));
    assert_eq!(rows[1]["exact"], "1/2");
    let v = json(&["expectation", "K:4", "--samples", "50", "--permutation-oracle"]);
    assert_eq!(v["vertices"][0]["permutation"], "1/4");
    assert_eq!(run(&["expectation", "cycle:9", "--permutation-oracle"]).status.code(), Some(2));
}

#[test]
fn percolation_reports_target_and_rows() {
    let v = json(&["percolation", "K:5", "--k", "1", "--trials", "200", "--mode", "bond", "--rows"]);
    assert_eq!(v["exact"], "1/2");
    assert_eq!(v["rows"].as_array().unwrap().len(), 200);
    let v = json(&["percolation", "K:5", "--k", "2", "--trials", "200", "--fixed-p", "0.5"]);
    assert_eq!(v["target"], 0.125);
    assert_eq!(v["exact"], Value::Null);
    assert_eq!(run(&["percolation", "cycle:6", "--k", "2"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "gauss_bonnet", "icosahedron", "--format", "human"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("1 passed, 0 failed"));
    let v = json(&["verify", "stability", "er:14:0.3@1"]);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["skipped"], 1);
    assert_eq!(run(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn seed_from_environment_and_output_file() {
    let via_flag = json(&["index", "er:20:0.3@1", "--seed", "5"]);
    let out = Command::new(env!("CARGO_BIN_EXE_discrete-gb"))
        .args(["index", "er:20:0.3@1"])
        .env("DISCRETE_GB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap(), via_flag);
    let other = json(&["index", "er:20:0.3@1", "--seed", "6"]);
    assert_ne!(other, via_flag);

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("out.json");
    let out = run(&["curvature", "cycle:4", "--output", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(written["curvature"]["total"], "0");
}

#[test]
fn bench_csv_rows() {
    let out = run(&["bench", "--n", "40", "--q", "0.2", "--seeds", "2", "--repetitions", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "method,n,q,seed,millis,chi,status");
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.ends_with(",ok")));
    let out = run(&["bench", "--n", "40", "--q", "0.9", "--seeds", "1", "--repetitions", "1", "--budget", "10", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("cliques,40,0.9,20131115,") && text.lines().nth(1).unwrap().ends_with(",,timeout"));
}

#[test]
fn verify_all_on_builtin_corpus() {
    let v = json(&["verify", "all", "--percolation-trials", "2000"]);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 10_000);
}
