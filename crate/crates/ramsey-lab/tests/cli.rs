//! End-to-end fixtures for every subcommand: golden values, parse-back of
//! the data stream, and the exit-code contract.

use std::process::{Command, Output};

use serde_json::Value;

use ramsey_lab::arrow::{verify_no_certificate, ColouringCertificate};
use ramsey_lab::graph::Graph;
use ramsey_lab::graph6::emit_graph6;

const K3: &str = "Bw";
const K4: &str = "C~";
const K5: &str = "D~{";
const K6: &str = "E~~w";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramsey-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is valid JSON")
}

#[test]
fn graph6_fixtures_are_what_they_claim() {
    assert_eq!(emit_graph6(&Graph::complete(3)), K3);
    assert_eq!(emit_graph6(&Graph::complete(4)), K4);
    assert_eq!(emit_graph6(&Graph::complete(5)), K5);
    assert_eq!(emit_graph6(&Graph::complete(6)), K6);
}

#[test]
fn density_golden_output() {
    let v = run_json(&["density", "--graph", K3]);
    assert_eq!(v["d2"], "2/1");
    assert_eq!(v["m2"], "2/1");
    assert_eq!(v["max_density"]["value"], "1/1");
    assert_eq!(v["strictly_2_balanced"], true);

    let v = run_json(&["density", "--graph", K4, "--f2", K3]);
    assert_eq!(v["m2"], "5/2");
    assert_eq!(v["m2_asym"]["value"], "12/5");
}

#[test]
fn density_parse_error_is_exit_3() {
    let out = run(&["density", "--graph", ""]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty(), "data stream must stay clean on errors");
    assert!(!out.stderr.is_empty());
}

#[test]
fn weights_golden_pendant_fixture() {
    // K4 with a pendant edge at vertex 3.
    let k4p = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
        .unwrap();
    let g6 = emit_graph6(&k4p);
    let v = run_json(&["weights", "--pattern", &g6, "--target", K3]);
    let pendant = k4p.edge_id(3, 4).unwrap().0.to_string();
    assert_eq!(v["weights"][&pendant], "6/5");
    for e in 0..7 {
        let key = e.to_string();
        if key != pendant {
            assert_eq!(v["weights"][&key], "1/1", "edge {key}");
        }
        assert_eq!(v["residuals"][&key], "0/1");
    }
    assert_eq!(v["m2_hf"], "12/5");
}

#[test]
fn weights_ordering_violation_is_exit_1() {
    // m2(K3) = 2 < m2(K4) = 5/2: domain error.
    let out = run(&["weights", "--pattern", K3, "--target", K4]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn arrow_k5_certificate_parses_back_and_verifies() {
    let v = run_json(&["arrow", "--host", K5, "--targets", &format!("{K3},{K3}")]);
    assert_eq!(v["arrows"], false);
    let host = Graph::complete(5);
    let mut colouring = vec![0u8; host.edge_count()];
    for (k, c) in v["certificate"].as_object().unwrap() {
        colouring[k.parse::<usize>().unwrap()] = c.as_u64().unwrap() as u8;
    }
    let cert = ColouringCertificate { colouring };
    let targets = [Graph::complete(3), Graph::complete(3)];
    assert!(verify_no_certificate(&host, &targets, &cert).unwrap());
}

#[test]
fn arrow_k6_arrows_and_budget_yields_exit_2() {
    let v = run_json(&["arrow", "--host", K6, "--targets", &format!("{K3},{K3}")]);
    assert_eq!(v["arrows"], true);
    assert_eq!(v["certificate"], Value::Null);

    let out = run(&["arrow", "--host", K6, "--targets", &format!("{K3},{K3}"), "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["arrows"], Value::Null);
    assert_eq!(v["indeterminate"]["budget"], 1);
}

#[test]
fn arrow_min_mono_golden() {
    let v = run_json(&[
        "arrow",
        "--complete",
        "6",
        "--targets",
        &format!("{K3},{K3}"),
        "--min-mono",
    ]);
    assert_eq!(v["min_total"], 2);
}

#[test]
fn typed_arrow_single_copy() {
    let dir = std::env::temp_dir().join("ramsey-lab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("typed-k3.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "edges": [[0,1],[0,2],[1,2]], "types": [0,1,2], "pattern": "Bw"}"#,
    )
    .unwrap();
    let spec = format!("@{}", path.display());
    // r = 1: the single typed copy forces colour 1 everywhere, so the typed
    // arrow holds.
    let v = run_json(&["typed-arrow", "--host", &spec]);
    assert_eq!(v["arrows"], true);
}

#[test]
fn sample_is_deterministic_and_coupled() {
    let args = ["sample", "--n", "10", "--p", "0.5", "--pattern", K3, "--seed", "42", "--coupled"];
    let a = run_json(&args);
    let b = run_json(&args);
    assert_eq!(a, b, "same seed must reproduce the sample");
    // The typed edge set is a subset of the coupled one.
    let typed_edges: Vec<(u64, u64)> = a["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    let coupled: Vec<(u64, u64)> = a["coupled"]["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e[0].as_u64().unwrap(), e[1].as_u64().unwrap()))
        .collect();
    for e in &typed_edges {
        assert!(coupled.contains(e));
    }
    assert_eq!(a["types"].as_array().unwrap().len(), typed_edges.len());
}

#[test]
fn moments_golden_expectation() {
    let v = run_json(&["moments", "--i", K3, "--n", "30", "--p", "3/10"]);
    // n(n-1)(n-2) p^3 / 27 at n = 30, p = 3/10 is exactly 609/25 = 24.36.
    assert_eq!(v["expectation"], "609/25");
    assert!(v["variance"].is_string());
    // At these parameters the tail minimizer is the single edge:
    // n^2 p = 270 < n^3 p^3 = 729.
    assert_eq!(v["tail"]["min_subgraph"].as_array().unwrap().len(), 1);
    assert_eq!(v["tail"]["min_value"], 270.0);
}

#[test]
fn suen_matches_library() {
    let v = run_json(&["suen", "--pattern", K3, "--n", "8", "--p", "0.3"]);
    let copies = ramsey_lab::graph::enumerate_copies(&Graph::complete(3), &Graph::complete(8));
    let report = ramsey_lab::suen::suen_bound(
        &Graph::complete(3),
        &copies,
        0.3,
        &ramsey_lab::balance::WeightFunction::uniform(3),
    )
    .unwrap();
    assert!((v["mu"].as_f64().unwrap() - report.mu).abs() < 1e-12);
    assert!((v["bound"].as_f64().unwrap() - report.bound).abs() < 1e-12);
}

#[test]
fn sweep_csv_parses_back_and_is_scheduler_independent() {
    let args = |jobs: &str| {
        vec![
            "sweep".to_string(),
            "--targets".into(),
            format!("{K3},{K3}"),
            "--n".into(),
            "8,10".into(),
            "--C".into(),
            "0.5:1.5:0.5".into(),
            "--trials".into(),
            "10".into(),
            "--seed".into(),
            "11".into(),
            "--jobs".into(),
            jobs.into(),
        ]
    };
    let one = run(&args("1").iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let four = run(&args("4").iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout, "CSV bytes must not depend on worker count");

    let text = String::from_utf8(one.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,C,p,trials,arrows,non_arrows,indeterminate,p_hat,wilson_lo,wilson_hi,seed"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 3);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 11);
        let trials: u64 = cols[3].parse().unwrap();
        let sum: u64 = cols[4].parse::<u64>().unwrap()
            + cols[5].parse::<u64>().unwrap()
            + cols[6].parse::<u64>().unwrap();
        assert_eq!(trials, sum);
    }
}

#[test]
fn sweep_json_mirror() {
    let out = run(&[
        "sweep", "--targets", &format!("{K3},{K3}"), "--n", "8", "--C", "1.0", "--trials", "5",
        "--seed", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let cells = v.as_array().unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0]["n"], 8);
    assert_eq!(cells[0]["trials"], 5);
}

#[test]
fn family_fixture() {
    let v = run_json(&[
        "family",
        "--f1",
        K3,
        "--f2",
        K3,
        "--vcap",
        "5",
        "--check-balance",
        "--condition-iv",
        K5,
    ]);
    let members = v["members"].as_array().unwrap();
    assert!(!members.is_empty());
    assert!(members.iter().any(|m| m["graph6"] == "Bw"));
    assert_eq!(v["verdict"]["m2_asym"], "2/1");
    assert_eq!(v["condition_iv"], true);
}

#[test]
fn unknown_arguments_are_exit_3() {
    assert_eq!(run(&["no-such-subcommand"]).status.code(), Some(3));
    assert_eq!(run(&["density"]).status.code(), Some(3), "missing required flag");
}

#[test]
fn version_prints_metadata() {
    let out = run(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}
