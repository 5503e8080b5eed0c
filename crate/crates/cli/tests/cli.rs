use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn mixsub(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixsub"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, v: &Value) -> String {
    let p = dir.path().join(name);
    fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout_json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn stderr_json(o: &Output) -> Value {
    assert_eq!(
        o.status.code(),
        Some(1),
        "stdout: {}",
        String::from_utf8_lossy(&o.stdout)
    );
    serde_json::from_slice(&o.stderr).unwrap()
}

fn example_system() -> Value {
    json!({"perms": {"1,2": [1, 3, 2], "2,3": [2, 1, 3], "3,1": [2, 3, 1]}})
}

fn run_on(dir: &TempDir, v: &Value, args: &[&str]) -> Output {
    let input = write(dir, "in.json", v);
    let mut all = args.to_vec();
    all.extend(["--input", input.as_str()]);
    mixsub(&all)
}

fn example_subdivision(dir: &TempDir) -> Value {
    stdout_json(&run_on(
        dir,
        &example_system(),
        &["realize2d", "--format", "subdivision"],
    ))
}

#[test]
fn perms_of_the_example_subdivision() {
    let dir = TempDir::new().unwrap();
    let sub = example_subdivision(&dir);
    let sys = stdout_json(&run_on(&dir, &sub, &["perms"]));
    assert_eq!(sys["n"], 3);
    assert_eq!(sys["d"], 3);
    assert_eq!(sys["perms"]["1,2"], json!([1, 3, 2]));
    assert_eq!(sys["perms"]["2,3"], json!([2, 1, 3]));
    // σ_31 = 231 is stored as its reverse σ_13.
    assert_eq!(sys["perms"]["1,3"], json!([1, 3, 2]));
}

#[test]
fn smallest_cyclic_system_is_rejected_with_a_witness() {
    let dir = TempDir::new().unwrap();
    let v = json!({"perms": {"1,2": [1, 2], "2,3": [1, 2], "3,1": [1, 2]}});
    let err = stderr_json(&run_on(&dir, &v, &["acyclic"]));
    assert_eq!(err["error"], "NotAcyclic");
    assert_eq!(err["detail"]["i"], 1);
    assert_eq!(err["detail"]["j"], 2);
    assert_eq!(err["detail"]["cycle"].as_array().unwrap().len(), 3);
}

#[test]
fn acyclic_system_passes() {
    let dir = TempDir::new().unwrap();
    let out = stdout_json(&run_on(&dir, &example_system(), &["acyclic"]));
    assert_eq!(out["acyclic"], true);
}

#[test]
fn empty_cell_list_is_a_volume_mismatch() {
    let dir = TempDir::new().unwrap();
    let v = json!({"n": 2, "d": 3, "cells": []});
    let err = stderr_json(&run_on(&dir, &v, &["validate"]));
    assert_eq!(err["error"], "VolumeMismatch");
}

#[test]
fn valid_subdivision_reports_its_volume() {
    let dir = TempDir::new().unwrap();
    let sub = example_subdivision(&dir);
    let out = stdout_json(&run_on(&dir, &sub, &["validate"]));
    assert_eq!(out["valid"], true);
    assert_eq!(out["volume"], "9");
}

#[test]
fn json_round_trips_are_lossless() {
    let dir = TempDir::new().unwrap();
    let sys = stdout_json(&run_on(&dir, &example_system(), &["perms"]));
    assert_eq!(stdout_json(&run_on(&dir, &sys, &["perms"])), sys);

    let tiling = stdout_json(&run_on(&dir, &example_system(), &["realize2d"]));
    let sub = example_subdivision(&dir);
    // Dual twice through files returns the original subdivision.
    let dual = stdout_json(&run_on(&dir, &sub, &["dual"]));
    assert_eq!(stdout_json(&run_on(&dir, &dual, &["dual"])), sub);
    // A tiling and its subdivision carry the same system.
    assert_eq!(stdout_json(&run_on(&dir, &tiling, &["perms"])), sys);
    assert_eq!(stdout_json(&run_on(&dir, &sub, &["perms"])), sys);
}

#[test]
fn output_flag_writes_a_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.json");
    let o = run_on(&dir, &example_system(), &["perms", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["perms"]["1,2"], json!([1, 3, 2]));
}

#[test]
fn dual_system_of_the_example() {
    let dir = TempDir::new().unwrap();
    let out = stdout_json(&run_on(&dir, &example_system(), &["dual"]));
    assert_eq!(out["perms"]["1,2"], json!([1, 3, 2]));
    assert_eq!(out["perms"]["2,3"], json!([2, 3, 1]));
    assert_eq!(out["perms"]["1,3"], json!([1, 2, 3]));
}

#[test]
fn deletion_keeps_original_labels() {
    let dir = TempDir::new().unwrap();
    let v = json!({"perms": {"1,2": [1, 4, 2, 3], "1,3": [3, 1, 2, 4], "2,3": [4, 3, 2, 1]}});
    let out = stdout_json(&run_on(&dir, &v, &["delete", "--index", "2"]));
    assert_eq!(out["original_labels"], json!([1, 3, 4]));
    assert_eq!(out["n"], 3);
    let sub = example_subdivision(&dir);
    let out = stdout_json(&run_on(&dir, &sub, &["contract", "--index", "1"]));
    assert_eq!(out["original_labels"], json!([2, 3]));
    assert_eq!(out["d"], 2);
}

#[test]
fn spread_detects_crowded_positions() {
    let dir = TempDir::new().unwrap();
    let v = json!({"d": 3, "positions": [[2, 0, 0], [2, 0, 0], [0, 0, 2]]});
    let err = stderr_json(&run_on(&dir, &v, &["spread"]));
    assert_eq!(err["detail"]["spread_out"], false);
    let v = json!({"d": 3, "positions": [[2, 0, 0], [0, 2, 0], [1, 0, 1]]});
    assert_eq!(stdout_json(&run_on(&dir, &v, &["spread"]))["spread_out"], true);
}

#[test]
fn positions_of_the_example() {
    let dir = TempDir::new().unwrap();
    let out = stdout_json(&run_on(&dir, &example_system(), &["positions"]));
    assert_eq!(out["positions"], json!([[2, 0, 0], [0, 2, 0], [1, 0, 1]]));
    assert_eq!(out["table"][0], json!(["ABC", "A", "A"]));
}

#[test]
fn render_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let tiling = stdout_json(&run_on(&dir, &example_system(), &["realize2d"]));
    let a = run_on(&dir, &tiling, &["render", "--show-dual"]);
    let b = run_on(&dir, &tiling, &["render", "--show-dual"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<polyline").count(), 9);
    let text = run_on(&dir, &tiling, &["render", "--format", "ascii"]);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "  1\n B b 3\n2 c C c C\n");
}

#[test]
fn render_needs_a_two_dimensional_input() {
    let dir = TempDir::new().unwrap();
    let v = json!({"perms": {"1,2": [1], "1,3": [1], "1,4": [1], "2,3": [1], "2,4": [1], "3,4": [1]}});
    let err = stderr_json(&run_on(&dir, &v, &["render"]));
    assert_eq!(err["error"], "UnsupportedDimension");
}

#[test]
fn short_palette_is_rejected() {
    let dir = TempDir::new().unwrap();
    let tiling = stdout_json(&run_on(&dir, &example_system(), &["realize2d"]));
    let err = stderr_json(&run_on(&dir, &tiling, &["render", "--palette", "red,blue"]));
    assert_eq!(err["error"], "Parse");
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(mixsub(&["bogus"]).status.code(), Some(2));
    assert_eq!(mixsub(&["enumerate", "--n", "x", "--d", "3"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    assert_eq!(run_on(&dir, &example_system(), &["delete"]).status.code(), Some(2));
    assert_eq!(
        run_on(&dir, &example_system(), &["realize2d", "--format", "png"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn malformed_input_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.json");
    fs::write(&p, "{not json").unwrap();
    let err = stderr_json(&mixsub(&["perms", "--input", p.to_str().unwrap()]));
    assert_eq!(err["error"], "Parse");
    let err = stderr_json(&run_on(&dir, &json!({"x": 1}), &["perms"]));
    assert_eq!(err["error"], "Parse");
}

#[test]
fn missing_input_file_is_reported() {
    let o = mixsub(&["perms", "--input", Path::new("/nonexistent/in.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn enumerate_counts_tilings_and_subdivisions() {
    let out = stdout_json(&mixsub(&["enumerate", "--n", "3", "--d", "3", "--kind", "tilings"]));
    assert_eq!(out["count"], 18);
    // Subdivisions carry labeled colors: 18 tilings times 3! labelings.
    let out = stdout_json(&mixsub(&["enumerate", "--n", "3", "--d", "3", "--limit", "2"]));
    assert_eq!(out["count"], 108);
    assert_eq!(out["items"].as_array().unwrap().len(), 2);
    let out = stdout_json(&mixsub(&["enumerate", "--n", "2", "--d", "4", "--kind", "systems"]));
    assert_eq!(out["count"], 24);
}

#[test]
fn enumerate_refuses_infeasible_scale() {
    let err = stderr_json(&mixsub(&["enumerate", "--n", "9", "--d", "9"]));
    assert_eq!(err["error"], "InfeasibleScale");
    let ok = mixsub(&[
        "enumerate",
        "--n",
        "2",
        "--d",
        "6",
        "--kind",
        "systems",
        "--seed-scale",
        "2,6",
    ]);
    assert_eq!(stdout_json(&ok)["count"], 720);
}

#[test]
fn realize_n3_output_validates() {
    let dir = TempDir::new().unwrap();
    let v = json!({"perms": {
        "1,2": [1, 3, 2], "1,3": [1, 2, 3], "1,4": [1, 2, 3],
        "2,3": [1, 2, 3], "2,4": [1, 2, 3], "3,4": [1, 2, 3]
    }});
    let sub = stdout_json(&run_on(&dir, &v, &["realize-n3"]));
    assert_eq!(stdout_json(&run_on(&dir, &sub, &["validate"]))["valid"], true);
    let sys = stdout_json(&run_on(&dir, &sub, &["perms"]));
    assert_eq!(sys["perms"]["1,2"], json!([1, 3, 2]));
}

#[test]
fn verify_is_byte_identical_across_worker_counts() {
    let a = mixsub(&["verify", "--n", "2", "--d", "3", "--workers", "1"]);
    let b = mixsub(&["verify", "--n", "2", "--d", "3", "--workers", "3"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.get("elapsed_ms").is_none());
}
