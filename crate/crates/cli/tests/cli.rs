// Copyright 2026 The mermin-bound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! End-to-end behaviour of the `mermin` binary: exit codes, the CSV
//! contract, serialization round trips and reproducibility.

use std::path::Path;
use std::process::{Command, Output};

use mermin_cli::emit::{read_csv, read_json, render, CsvRow, Format, CSV_COLUMNS};

fn mermin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mermin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_ghz_and_product() {
    let o = mermin(&["analyze", "--l0", "0.7071", "--l4", "0.7071", "--json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let json = &text[text.find('{').unwrap()..];
    let rec: serde_json::Value = serde_json::from_str(json).unwrap();
    assert!((rec["gamma_r"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((rec["e4sq"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let o = mermin(&["analyze", "--l0", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let rec: serde_json::Value = serde_json::from_str(&text[text.find('{').unwrap()..]).unwrap();
    assert!((rec["gamma_r"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    for k in ["e1sq", "e2sq", "e3sq", "e4sq"] {
        assert!(rec[k].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn invalid_params_exit_2_naming_the_invariant() {
    let o = mermin(&["analyze", "--l0", "0.6", "--l1", "0.8", "--phi", "3.5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("phi"), "{}", stderr(&o));

    let o = mermin(&["analyze", "--l0", "0.5", "--l1", "-0.1"]);
    assert_eq!(code(&o), 2);

    let o = mermin(&["analyze", "--l0", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("must equal 1"), "{}", stderr(&o));
}

#[test]
fn unknown_family_exit_2() {
    let o = mermin(&["sweep", "family", "--family", "e5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unwritable_path_exit_3() {
    let o = mermin(&[
        "sweep",
        "random",
        "--n",
        "2",
        "--no-optimize",
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn exhausted_budget_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fc.csv");
    let o = mermin(&[
        "sweep",
        "fixed-class",
        "--max-attempts",
        "50",
        "--no-optimize",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("exhausted"));
}

#[test]
fn csv_header_matches_contract() {
    let o = mermin(&[
        "sweep",
        "random",
        "--n",
        "3",
        "--seed",
        "9",
        "--restarts",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "seed_index,l0,l1,l2,l3,l4,phi,e1sq,e2sq,e3sq,e4sq,e5,ct_sq,neg_alpha1,\
         alpha2_1,alpha3_1,gamma2_1,theta_1,bound_1,\
         alpha2_2,alpha3_2,gamma2_2,theta_2,bound_2,\
         alpha2_3,alpha3_3,gamma2_3,theta_3,bound_3,gamma_r,gamma,converged"
    );
    assert_eq!(lines.count(), 3);
    assert_eq!(CSV_COLUMNS.len(), 32);
}

#[test]
fn json_and_csv_outputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("a.csv");
    let json_path = dir.path().join("a.json");
    for (p, f) in [(&csv_path, "csv"), (&json_path, "json")] {
        let o = mermin(&[
            "sweep",
            "family",
            "--family",
            "ghz",
            "--grid",
            "7",
            "--restarts",
            "4",
            "--format",
            f,
            "--out",
            path_str(p),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    let records = read_json(std::fs::File::open(&json_path).unwrap()).unwrap();
    // JSON → CSV reproduces the CLI's CSV byte for byte.
    let csv_bytes = std::fs::read(&csv_path).unwrap();
    assert_eq!(render(&records, Format::Csv).unwrap(), csv_bytes);
    // CSV values equal the JSON values exactly.
    let rows = read_csv(&csv_bytes[..]).unwrap();
    assert_eq!(rows, records.iter().map(CsvRow::from).collect::<Vec<_>>());
    // JSON → JSON is the identity.
    assert_eq!(
        render(&records, Format::Json).unwrap(),
        std::fs::read(&json_path).unwrap()
    );
}

#[test]
fn repeated_runs_are_identical() {
    let args = [
        "sweep",
        "random",
        "--n",
        "4",
        "--seed",
        "42",
        "--restarts",
        "3",
    ];
    let a = mermin(&args);
    let b = mermin(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = mermin(&[
        "sweep",
        "random",
        "--n",
        "4",
        "--seed",
        "43",
        "--restarts",
        "3",
    ]);
    assert_ne!(a.stdout, c.stdout);
}
