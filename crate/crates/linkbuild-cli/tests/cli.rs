//! End-to-end tests of the `linkbuild` binary: exit codes, output formats,
//! determinism.

use std::path::Path;
use std::process::{Command, Output};

use linkbuild_core::families::parse_roles;
use linkbuild_core::graph::parse_edge_list;

fn linkbuild(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkbuild"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn select_json_reports_sources() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "two.txt", "2\n0 1\n");
    let out = linkbuild(&["select", &graph, "--k", "1", "--strategy", "naive", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["sources"], serde_json::json!([1]));
    assert_eq!(v["strategy"], "naive");
    assert!(v["final_pi_x"].as_f64().unwrap() > 0.0);
}

#[test]
fn select_csv_round_trips_through_a_csv_reader() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "g.txt", "4\n1 2\n2 3\n3 1\n");
    let out = linkbuild(&["select", &graph, "--k", "2", "--strategy", "rgreedy"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "strategy");
    assert_eq!(&headers[5], "chosen");
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        // 12 significant digits, scientific notation
        let objective = &row[6];
        assert!(
            regex_lite_match(objective),
            "objective {objective:?} is not fixed-precision scientific"
        );
        let _: f64 = objective.parse().unwrap();
    }
}

// Check the {:.11e} shape without a regex dependency.
fn regex_lite_match(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    let (mantissa, exponent) = match body.split_once('e') {
        Some(pair) => pair,
        None => return false,
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some(pair) => pair,
        None => return false,
    };
    int.len() == 1
        && frac.len() == 11
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.chars().all(|c| c.is_ascii_digit())
        && exponent.strip_prefix('-').unwrap_or(exponent).chars().all(|c| c.is_ascii_digit())
}

#[test]
fn unknown_strategy_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "g.txt", "2\n0 1\n");
    let out = linkbuild(&["select", &graph, "--k", "1", "--strategy", "bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn missing_file_is_a_data_error() {
    let out = linkbuild(&["select", "/nonexistent/g.txt", "--k", "1", "--strategy", "naive"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cannot load"), "stderr: {err}");
}

#[test]
fn oversized_budget_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write_graph(dir.path(), "g.txt", "2\n0 1\n");
    let out = linkbuild(&["select", &graph, "--k", "5", "--strategy", "naive"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_exits_cleanly() {
    let out = linkbuild(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("naive-bound"));
}

#[test]
fn sweeps_are_deterministic() {
    let args = ["naive-bound", "--u", "5,20", "--k", "2,3"];
    let first = linkbuild(&args);
    let second = linkbuild(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let g1 = linkbuild(&["guarantee", "--instances", "5", "--seed", "7"]);
    let g2 = linkbuild(&["guarantee", "--instances", "5", "--seed", "7"]);
    assert!(g1.status.success());
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn rgreedy_bound_table_is_consistent() {
    let out = linkbuild(&["rgreedy-bound", "--c", "2,5,60", "--k", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    let formula: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!(formula.windows(2).all(|w| w[0] < w[1]), "{formula:?}");
    // Small instances carry a measured cross-check; the big one is symbolic.
    assert!(!rows[0][8].is_empty());
    assert!(rows[2][8].is_empty());
    let system: f64 = rows[0][7].parse().unwrap();
    let explicit: f64 = rows[0][8].parse().unwrap();
    assert!((system - explicit).abs() < 1e-9);
}

#[test]
fn guarantee_run_holds_on_random_instances() {
    let out = linkbuild(&["guarantee", "--instances", "12", "--max-n", "9", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    for row in &rows {
        assert_eq!(&row[9], "true");
        let ratio: f64 = row[7].parse().unwrap();
        let bound: f64 = row[8].parse().unwrap();
        assert!(ratio >= bound);
    }
}

#[test]
fn guarantee_rejects_tiny_node_bound() {
    let out = linkbuild(&["guarantee", "--instances", "2", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_json_is_verified_and_positive() {
    let out = linkbuild(&["witness", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["found"], serde_json::json!(true));
    assert!(v["margin"].as_f64().unwrap() > 1e-6);
    assert!(v["edges"].as_array().unwrap().len() >= 5);
}

#[test]
fn generate_writes_loadable_graph_and_roles() {
    let dir = tempfile::tempdir().unwrap();
    let graph_path = dir.path().join("family.txt");
    let out = linkbuild(&[
        "generate",
        "--family",
        "sink-vs-sink",
        "--k",
        "2",
        "--c",
        "3",
        "--graph-out",
        graph_path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let n = v["n"].as_u64().unwrap() as usize;
    let graph = parse_edge_list(&std::fs::read_to_string(&graph_path).unwrap()).unwrap();
    assert_eq!(graph.node_count(), n);
    assert_eq!(graph.edge_count(), v["edges"].as_u64().unwrap() as usize);
    let roles_text =
        std::fs::read_to_string(v["roles_path"].as_str().unwrap()).unwrap();
    let roles = parse_roles(&roles_text).unwrap();
    assert_eq!(roles.len(), n);
    // cycle family requires --u
    let bad = linkbuild(&[
        "generate",
        "--family",
        "cycle-vs-sink",
        "--k",
        "2",
        "--graph-out",
        graph_path.to_str().unwrap(),
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
