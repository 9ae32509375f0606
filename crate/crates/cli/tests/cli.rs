use std::path::PathBuf;
use std::process::Command;

use binedge_cli::{run, EXIT_BUDGET, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data/v1")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("binedge").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = cli(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

#[test]
fn golden_reports_are_byte_stable() {
    for name in ["fig1a_G", "fig1b_H", "fig2a_L", "fig2b_F", "fig3", "fig4"] {
        let file = data(&format!("{name}.edges"));
        let (code, out, _) = cli(&["analyze", &file, "--props", "unmixed,rcut=3", "--json"]);
        assert_eq!(code, EXIT_OK, "{name}");
        assert_eq!(out, golden(&format!("{name}.unmixed.json")), "{name}");
    }
}

#[test]
fn fig3_is_accessible_and_strongly_unmixed() {
    let (code, v) = json(&[
        "analyze",
        &data("fig3.edges"),
        "--props",
        "accessible,su",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["accessible"]["verdict"], true);
    assert_eq!(v["strongly_unmixed"]["value"], true);
    assert_eq!(v["cutsets"]["count"], 17);
    assert!(v.get("unmixed").is_none() && v.get("cm").is_none());
}

#[test]
fn non_unmixed_verdict_is_not_a_failure() {
    let (code, v) = json(&[
        "analyze",
        &data("fig2a_L.edges"),
        "--props",
        "unmixed",
        "--json",
    ]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["unmixed"]["value"], false);
    let w = &v["unmixed"]["witness"];
    assert_eq!(w["members"], serde_json::json!([1, 3, 4, 6, 10]));
    assert_eq!(w["component_count"], 5);
}

#[test]
fn graph6_input_gives_one_report_per_graph() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("two.g6");
    std::fs::write(&p, ">>graph6<<A_\nBw\n").unwrap();
    let path = p.to_str().unwrap();
    let (code, v) = json(&[
        "analyze", path, "--format", "graph6", "--json", "--props", "su",
    ]);
    assert_eq!(code, EXIT_OK);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[1]["graph"]["n"], 3);
    assert_eq!(arr[1]["graph"]["m"], 3);
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.edges");
    std::fs::write(&p, "1 2\n2 x\n").unwrap();
    let (code, out, err) = cli(&["analyze", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty() && err.contains("line 2"), "{err}");
    assert_eq!(
        cli(&["analyze", &data("fig3.edges"), "--props", "nope"]).0,
        EXIT_USAGE
    );
    assert_eq!(cli(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(cli(&["construct", "corpus", "fig9"]).0, EXIT_USAGE);
    assert_eq!(
        cli(&["verify", "block", "--family", "exhaustive:12"]).0,
        EXIT_USAGE
    );
    assert_eq!(cli(&["search", "conjecture", "--max-n", "9"]).0, EXIT_USAGE);
    assert_eq!(cli(&["--help"]).0, EXIT_OK);
}

#[test]
fn duplicate_edges_warn_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("dup.edges");
    std::fs::write(&p, "1 2\n2 1\n").unwrap();
    let (code, out, err) = cli(&["analyze", p.to_str().unwrap(), "--props", "unmixed"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("warning"), "{err}");
    assert!(out.contains("edges: 1"), "{out}");
}

#[test]
fn exhausted_budget_exits_three() {
    let (code, _, err) = cli(&[
        "analyze",
        &data("fig5.edges"),
        "--props",
        "su",
        "--budget",
        "1e-9",
    ]);
    assert_eq!(code, EXIT_BUDGET, "{err}");
    let (code, v) = json(&["search", "conjecture", "--max-n", "5", "--budget", "1e-9"]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(v["skipped"]
        .as_array()
        .unwrap()
        .iter()
        .all(|s| s["budget"] == true));
}

#[test]
fn conjecture_search_small() {
    let (code, v) = json(&["search", "conjecture", "--max-n", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["examined"], 10);
    assert_eq!(v["candidates"], serde_json::json!([]));
    let (code, v) = json(&["search", "conjecture", "--graph6", &data("connected7.g6")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["examined"], 853);
}

#[test]
fn verify_suites() {
    let (code, v) = json(&["verify", "block", "--family", "random:30:10", "--seed", "5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["examined"], 30);
    let (code, v) = json(&["verify", "star", "--r-max", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["violations"], serde_json::json!([]));
    let (code, v) = json(&["verify", "regular", "--family", "exhaustive:6", "--r", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(v["examined"].as_u64().unwrap() > 0);
    // Some leaf pairings of the corpus graphs fail the hypotheses and are skipped.
    let (code, v) = json(&["verify", "gluing"]);
    assert_eq!(code, EXIT_OK);
    let skipped = v["skipped"].as_array().unwrap();
    assert!(!skipped.is_empty() && skipped.iter().all(|s| s["budget"] == false));
}

#[test]
fn family_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fam.json");
    std::fs::write(
        &p,
        r#"{"source":"exhaustive_connected","max_n":5,"filters":{"min_n":5}}"#,
    )
    .unwrap();
    let (code, v) = json(&["verify", "block", "--family", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["examined"], 21);
}

#[test]
fn construct_round_trips_through_analyze() {
    let (code, out, _) = cli(&["construct", "star", "3", "3", "3", "--whiskered"]);
    assert_eq!(code, EXIT_OK);
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("s.edges");
    std::fs::write(&p, &out).unwrap();
    let (_, v) = json(&[
        "analyze",
        p.to_str().unwrap(),
        "--json",
        "--props",
        "accessible,su",
    ]);
    assert_eq!(v["graph"]["n"], 10);
    assert_eq!(v["accessible"]["verdict"], true);
    assert_eq!(v["strongly_unmixed"]["value"], true);
    let (_, g6, _) = cli(&["construct", "corpus", "fig3", "--graph6"]);
    assert_eq!(g6.trim().len(), 1 + 8);
}

#[test]
fn blocks_and_decompose() {
    let (code, out, _) = cli(&["blocks", &data("fig3.edges"), "--whiskered"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("# block").count(), 4);
    let (code, out, _) = cli(&["decompose", &data("fig3.edges")]);
    assert_eq!(code, EXIT_OK);
    // Header plus 17 rows, and every height equals 10 - 1.
    let rows: Vec<&str> = out.lines().skip(1).filter(|l| l.starts_with('{')).collect();
    assert_eq!(rows.len(), 17);
    assert!(rows.iter().all(|r| r.trim_end().ends_with(" 9")));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_binedge");
    let ok = Command::new(bin)
        .args(["analyze", &data("fig3.edges"), "--props", "unmixed"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(ok.stderr.is_empty());
    let bad = Command::new(bin)
        .args(["analyze", "/no/such/file"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(bad.stdout.is_empty() && !bad.stderr.is_empty());
}
