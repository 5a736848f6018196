use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn qtfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtfa")).args(args).output().expect("qtfa runs")
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn plancherel_suite_passes_with_enough_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = qtfa(&["verify", "--suite", "plancherel", "--seed", "7", "--output", arg(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let doc = report(&out);
    let reports = doc["reports"].as_array().unwrap();
    assert!(reports.len() >= 40);
    assert_eq!(doc["summary"]["total"], reports.len());
    assert_eq!(doc["summary"]["failed"], 0);
    assert_eq!(doc["config"]["suite"], "plancherel");
    assert_eq!(doc["config"]["seed"], 7);
    assert!(doc["timestamp"].is_u64());
    for key in ["name", "lhs", "rhs", "constant_values", "margin", "parameters", "pass"] {
        assert!(reports[0].get(key).is_some(), "missing {key}");
    }
}

#[test]
fn repeated_runs_are_byte_identical_without_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let args = ["verify", "--suite", "relations", "--seed", "7", "--no-timestamp", "--output", arg(&out)];
    assert_eq!(qtfa(&args).status.code(), Some(0));
    let first = std::fs::read(&out).unwrap();
    assert_eq!(qtfa(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&out).unwrap());
    assert!(report(&out).get("timestamp").is_none());
}

#[test]
fn qwft_dump_has_one_value_per_node() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("out.bin");
    let (f, g) = (spec("gauss_a0.5.json"), spec("gauss_b0.5.json"));
    let run = qtfa(&["qwft", "--signal", arg(&f), "--window", arg(&g), "--dump-field", arg(&dump)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(std::fs::metadata(&dump).unwrap().len(), 8 * 5 + 32 * 32u64.pow(4));
    let field = qtfa_core::io::read_field(&dump).unwrap();
    assert_eq!(field.x_grid.n_per_axis, 32);
    assert_eq!(field.w_grid.n_per_axis, 32);
}

#[test]
fn transforms_report_their_identities() {
    let dir = tempfile::tempdir().unwrap();
    let f = spec("gauss_a1.json");
    for (cmd, n) in [("qft", 1), ("ambiguity", 3), ("wigner", 2), ("reconstruct", 1)] {
        let out = dir.path().join(format!("{cmd}.json"));
        let dump = dir.path().join(format!("{cmd}.bin"));
        let run = qtfa(&[cmd, "--signal", arg(&f), "--output", arg(&out), "--dump-field", arg(&dump)]);
        assert_eq!(run.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&run.stderr));
        assert_eq!(report(&out)["reports"].as_array().unwrap().len(), n, "{cmd}");
        assert!(dump.exists(), "{cmd}");
    }
}

#[test]
fn grid_overrides_apply_to_spec_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let f = spec("gauss_a0.5.json");
    let run = qtfa(&["qft", "--signal", arg(&f), "--n", "16", "--l", "6", "--output", arg(&out)]);
    assert_eq!(run.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["config"]["n"], 16);
    assert_eq!(doc["reports"][0]["parameters"]["N"], 16.0);
}

#[test]
fn csv_flattens_parameters_and_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let run = qtfa(&["verify", "--suite", "price", "--format", "csv", "--output", arg(&out)]);
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    let mut rd = csv::Reader::from_path(&out).unwrap();
    let header = rd.headers().unwrap().clone();
    assert_eq!(&header[0], "name");
    assert!(header.iter().any(|h| h.starts_with("const.")));
    assert!(header.iter().any(|h| h == "param.a"));
    assert_eq!(rd.records().count(), 108);
}

#[test]
fn invalid_specs_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"d": 1, "n_per_axis": 30, "half_extent": 8.0, "kind": "signal", "a": 1, "b": 1}"#)
        .unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["qft", "--signal", arg(&bad)],
        vec!["qft"],
        vec!["qwft", "--signal", "/nonexistent/spec.json"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--suite", "plancherel", "--n", "24"],
        vec!["verify", "--suite", "plancherel", "--l", "-1"],
    ];
    for args in cases {
        let run = qtfa(&args);
        assert_eq!(run.status.code(), Some(2), "{args:?}");
        assert!(!run.stderr.is_empty(), "{args:?}");
        assert!(run.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn thread_count_comes_from_the_environment() {
    let run = Command::new(env!("CARGO_BIN_EXE_qtfa"))
        .args(["qft", "--signal", arg(&spec("gauss_a2.json"))])
        .env("QTFA_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(2));
    let run = Command::new(env!("CARGO_BIN_EXE_qtfa"))
        .args(["qft", "--signal", arg(&spec("gauss_a2.json"))])
        .env("QTFA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
}
