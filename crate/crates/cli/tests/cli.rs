use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ribbon_moduli::permgraph::{samples, StableRibbonGraph};
use serde_json::{json, Value};
use tempfile::TempDir;

fn ribbon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbon")).args(args).env_remove("RIBBON_CACHE_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn write_graph(dir: &Path, name: &str, g: &StableRibbonGraph) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, g.to_json()).unwrap();
    path
}

#[test]
fn tau_zero_cubed_is_one() {
    let o = ribbon(&["--format", "json", "intersect", "--genus", "0", "--d", "0,0,0", "--p", "3,5,7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["value"], "1");
}

#[test]
fn p_independence_flag_reports_agreement() {
    let o = ribbon(&["--format", "json", "intersect", "--genus", "1", "--d", "1", "--check-p-independence", "--seed", "9", "--ledger"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["value"], "1/24");
    assert_eq!(v["check"]["agrees"], true);
    assert_eq!(v["ledger"].as_array().unwrap().len(), 1);
}

#[test]
fn job_count_does_not_change_output() {
    let args = |jobs: &'static str| ["--jobs", jobs, "--format", "json", "intersect", "--genus", "0", "--d", "1,0,0,0", "--ledger"];
    let one = ribbon(&args("1"));
    let two = ribbon(&args("2"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(json_of(&one)["value"], "1");
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ribbon(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ribbon(&["intersect", "--genus", "1", "--d", "2"]).status.code(), Some(2));
    assert_eq!(ribbon(&["check", "bogus"]).status.code(), Some(2));
    assert_eq!(ribbon(&["--format", "dot", "intersect", "--genus", "0", "--d", "0,0,0"]).status.code(), Some(2));
}

#[test]
fn inspect_theta_graph() {
    let dir = TempDir::new().unwrap();
    let path = write_graph(dir.path(), "theta.json", &samples::theta_one_face());
    let p = path.to_str().unwrap();
    let text = ribbon(&["inspect", p]);
    assert_eq!(text.status.code(), Some(0));
    assert!(stdout(&text).contains("V=2 E=3 F=1 genus 1"), "{}", stdout(&text));
    let v = json_of(&ribbon(&["--format", "json", "inspect", p]));
    assert_eq!(v["genus"], 1);
    assert_eq!(v["stable"], true);
    let back = StableRibbonGraph::from_json(&v["graph"].to_string()).unwrap();
    assert_eq!(back, samples::theta_one_face());
    let dot = stdout(&ribbon(&["--format", "dot", "inspect", p]));
    assert!(dot.contains("--"), "{dot}");
}

#[test]
fn inspect_reports_defects_and_instability() {
    let dir = TempDir::new().unwrap();
    let unstable = write_graph(dir.path(), "bad.json", &samples::single_edge(0, 1));
    let o = ribbon(&["--format", "json", "inspect", unstable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["defects"], json!([0, 1]));
    assert_eq!(v["stable"], false);
    let stable = write_graph(dir.path(), "good.json", &samples::single_edge(1, 1));
    let o = ribbon(&["inspect", stable.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("defect 1"));
}

#[test]
fn malformed_graph_reports_byte_offset() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"half_edges\": 6, \"vertices\": [}").unwrap();
    let o = ribbon(&["inspect", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte"), "{err}");
}

#[test]
fn contract_preserves_genus() {
    let dir = TempDir::new().unwrap();
    let path = write_graph(dir.path(), "theta.json", &samples::theta_planar());
    let o = ribbon(&["--format", "json", "contract", path.to_str().unwrap(), "--edges", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let g = StableRibbonGraph::from_json(&stdout(&o)).unwrap();
    assert_eq!((g.genus(), g.face_count(), g.edge_count()), (0, 3, 2));
}

#[test]
fn cells_of_planar_theta() {
    let dir = TempDir::new().unwrap();
    let path = write_graph(dir.path(), "theta.json", &samples::theta_planar());
    let v = json_of(&ribbon(&["--format", "json", "cells", path.to_str().unwrap(), "--p", "3,5,7"]));
    assert_eq!(v["empty"], false);
    assert_eq!(v["dimension"], 0);
    // perimeters violating the triangle inequality
    let v = json_of(&ribbon(&["--format", "json", "cells", path.to_str().unwrap(), "--p", "1,1,5"]));
    assert_eq!(v["empty"], true);
}

#[test]
fn enumerate_uses_cache_directory() {
    let dir = TempDir::new().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ribbon"))
            .args(["--format", "json", "enumerate", "--genus", "1", "--faces", "1"])
            .env("RIBBON_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert!(dir.path().join("trivalent-g1-n1.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(json_of(&first).as_array().unwrap().len(), 1);
}

#[test]
fn model0_points() {
    let v = json_of(&ribbon(&["--format", "json", "model0", "--points", "0,1,-1,inf"]));
    assert_eq!(v["images"].as_array().unwrap().len(), 4);
    assert!(v["cross_ratio"].is_string());
    assert_eq!(ribbon(&["model0", "--points", "0,0,1"]).status.code(), Some(2));
}

#[test]
fn check_suite_passes_and_serializes() {
    let o = ribbon(&["--format", "json", "check", "model0", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["suite"], "model0");
    assert_eq!(v["failures"], json!([]));
}
