use std::fs;
use std::process::{Command, Output};

use filtop::report::RunReport;
use serde_json::Value;

fn filtop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_filtop"))
        .args(args)
        .env_remove("FILTOP_WINDOW")
        .env_remove("FILTOP_BOUND")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> RunReport {
    serde_json::from_slice(&out.stdout).expect("stdout is a report")
}

fn status(r: &RunReport, name: &str) -> String {
    let v = r.verdicts.iter().find(|v| v.name == name).unwrap_or_else(|| panic!("no verdict {name}"));
    serde_json::to_value(v).unwrap()["status"].as_str().unwrap().to_string()
}

#[test]
fn extension_example_and_echo() {
    let out = filtop(&["rado", "extension", "--u", "0,1", "--w", "2", "--graph", "bitrado"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r.witnesses["z"], Value::from(11));
    assert_eq!(r.command, ["rado", "extension", "--u", "0,1", "--w", "2", "--graph", "bitrado"]);
    assert_eq!(r.parameters["bound"], Value::from(1_000_000));
}

#[test]
fn empty_extension_sets() {
    let r = report(&filtop(&["rado", "extension"]));
    assert_eq!(r.witnesses["z"], Value::from(0));
}

#[test]
fn exit_code_one_on_failure() {
    let out = filtop(&["mekler", "--action", "shift", "--moiety", "even", "--mode", "filter"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(status(&r, "always-infinite"), "fails");
}

#[test]
fn exit_code_two_on_bad_input() {
    assert_eq!(filtop(&["group", "--degree", "3", "--gens", "(0 1"]).status.code(), Some(2));
    assert_eq!(filtop(&["rado", "nbhd", "--graph", "nonsense"]).status.code(), Some(2));
    assert_eq!(filtop(&["topo", "roundtrip"]).status.code(), Some(2));
    assert_eq!(filtop(&["rado", "chain", "--colours", "1"]).status.code(), Some(2));
    let out = filtop(&["mekler", "--moiety", "set:0,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn exit_code_three_on_guards_and_exhaustion() {
    assert_eq!(filtop(&["topo", "roundtrip", "--n", "9"]).status.code(), Some(3));
    let out = filtop(&["rado", "embed", "--graph", "bitrado", "--steps", "40"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("step 35"), "{err}");
}

#[test]
fn group_reports() {
    let r = report(&filtop(&["group", "--degree", "4", "--gens", "(0 1 2 3)"]));
    assert_eq!(r.witnesses["primitive"], Value::Bool(false));
    assert_eq!(r.witnesses["nontrivial_invariant_topologies"], Value::from(1));
    let tops = r.witnesses["invariant_topologies"].as_array().unwrap();
    assert!(tops.iter().any(|t| t["trivial"] == Value::Bool(false) && t["t0"] == Value::Bool(false)));

    let r = report(&filtop(&["group", "--degree", "3", "--gens", "(0 1 2),(0 1)"]));
    assert_eq!(r.witnesses["primitive"], Value::Bool(true));
    assert_eq!(r.witnesses["nontrivial_invariant_topologies"], Value::from(0));
}

#[test]
fn topo_counts() {
    for (n, count) in [(0, 1), (2, 4), (4, 355)] {
        let r = report(&filtop(&["topo", "roundtrip", "--n", &n.to_string()]));
        assert_eq!(r.witnesses["preorders"], Value::from(count));
        assert!(!r.any_fails());
    }
}

#[test]
fn embed_writes_pairs_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.txt");
    let dot = dir.path().join("embedding.dot");
    let out = filtop(&[
        "rado",
        "embed",
        "--graph",
        "bernoulli:seed=1,p=1/2",
        "--steps",
        "200",
        "--pairs",
        pairs.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r.witnesses["hit_prefix"].as_u64().unwrap() >= 100);
    assert_eq!(r.seed, Some(1));
    let text = fs::read_to_string(&pairs).unwrap();
    assert_eq!(text.lines().count(), 200);
    assert!(text.lines().all(|l| l.split(' ').count() == 2));
    assert!(fs::read_to_string(&dot).unwrap().starts_with("graph embedding {"));
}

#[test]
fn file_descriptor_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k33.txt");
    fs::write(&path, "000111\n000111\n000111\n111000\n111000\n111000\n").unwrap();
    let periodic = format!("periodic:{}", path.display());
    let out = filtop(&["rado", "spanning", "--graph", &periodic, "--bound", "10000"]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    for name in ["a-filter-nontrivial", "b-spanning-copy-of-r", "c-filter-inside-r-filter"] {
        assert_eq!(status(&r, name), "fails", "{name}");
    }
    assert_eq!(r.witnesses["consistent"], Value::Bool(true));

    let finite = format!("file:{}", path.display());
    let r = report(&filtop(&["rado", "extension", "--graph", &finite, "--u", "0", "--w", "1"]));
    assert_eq!(r.witnesses["z"], Value::Null);

    let missing = format!("file:{}", dir.path().join("absent").display());
    assert_eq!(filtop(&["rado", "nbhd", "--graph", &missing]).status.code(), Some(2));
}

#[test]
fn env_overrides_default_window() {
    let out = Command::new(env!("CARGO_BIN_EXE_filtop"))
        .args(["partition", "--min-classes", "1"])
        .env("FILTOP_WINDOW", "500")
        .output()
        .unwrap();
    let r = report(&out);
    assert_eq!(r.parameters["window"], Value::from(500));
    // an explicit flag wins over the environment
    let out = Command::new(env!("CARGO_BIN_EXE_filtop"))
        .args(["partition", "--window", "700"])
        .env("FILTOP_WINDOW", "500")
        .output()
        .unwrap();
    assert_eq!(report(&out).parameters["window"], Value::from(700));
}

#[test]
fn poset_dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("poset.dot");
    let out = filtop(&["poset", "--stages", "2", "--max-config", "1", "--window", "10", "--dot", dot.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out).witnesses["elements"], Value::from(4));
    assert!(fs::read_to_string(dot).unwrap().contains("rankdir=BT"));
}

#[test]
fn reports_round_trip_through_json() {
    let out = filtop(&["rado", "chain", "--colours", "2", "--trials", "3", "--window", "5000"]);
    let r = report(&out);
    let again: RunReport = serde_json::from_str(&r.to_json_pretty()).unwrap();
    assert_eq!(again, r);
}
