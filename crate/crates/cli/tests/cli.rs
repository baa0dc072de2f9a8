use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_redswap"))
        .args(args)
        .current_dir(Path::new(env!("CARGO_MANIFEST_DIR")))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn default_verify_reports_the_capacity_bound_failure() {
    let o = run(&["verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let failed: Vec<&str> = v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["capacity bound, neither maximal"]);
}

#[test]
fn verify_is_reproducible() {
    let a = run(&["verify", "--trials", "30", "--seed", "7", "--format", "json"]);
    let b = run(&["verify", "--trials", "30", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_smoke_and_tight_tolerance() {
    assert_eq!(run(&["verify", "--trials", "1"]).status.code(), Some(0));
    let o = run(&["verify", "--trials", "20", "--tolerance", "1e-16"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("reproduce with --seed 42 --trials 20"));
}

#[test]
fn bell_swap_has_four_even_outcomes() {
    let o = run(&["swap", "--input", "fixtures/bell_bell.json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<_> = text
        .lines()
        .filter(|l| l.starts_with('(') && !l.starts_with("(r"))
        .collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.split_whitespace().nth(2) == Some("0.25")));
}

#[test]
fn missing_basis_notes_defaults() {
    let o = run(&["swap", "--input", "fixtures/bell_bell_default.json"]);
    assert!(stdout(&o).contains("using n = 1, m = 1"));
    let o = run(&[
        "swap",
        "--input",
        "fixtures/bell_bell_default.json",
        "--n",
        "0.5",
        "--m",
        "0.5",
    ]);
    assert!(!stdout(&o).contains("note:"));
}

#[test]
fn qutrit_swap_lists_nine_outcomes() {
    let o = run(&["swap", "--input", "fixtures/qutrit.json", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcomes"].as_array().unwrap().len(), 9);
    assert_eq!(
        run(&["swap", "--input", "fixtures/qutrit.json", "--n", "0.5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn chain_runs() {
    let o = run(&["chain", "--input", "fixtures/chain.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("total probability: 1"));
}

#[test]
fn triangle_route_text_and_json_agree() {
    let o = run(&[
        "route",
        "--input",
        "fixtures/triangle.json",
        "--source",
        "A",
        "--target",
        "C",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("path: A - B - C"));
    let j = run(&[
        "route",
        "--input",
        "fixtures/triangle.json",
        "--source",
        "A",
        "--target",
        "C",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["path"], serde_json::json!(["A", "B", "C"]));
    let avg = v["simulation"]["average_fidelity"].as_f64().unwrap();
    assert!(text.contains(&format!("average fidelity: {avg}")));
}

#[test]
fn route_errors_map_to_exit_codes() {
    let same = run(&[
        "route",
        "--input",
        "fixtures/triangle.json",
        "--source",
        "A",
        "--target",
        "A",
    ]);
    assert_eq!(same.status.code(), Some(2));
    let unknown = run(&[
        "route",
        "--input",
        "fixtures/triangle.json",
        "--source",
        "A",
        "--target",
        "Z",
    ]);
    assert_eq!(unknown.status.code(), Some(2));
    let split = run(&[
        "route",
        "--input",
        "fixtures/split.json",
        "--source",
        "A",
        "--target",
        "D",
    ]);
    assert_eq!(split.status.code(), Some(3));
    assert!(stderr(&split).contains("no path"));
}

#[test]
fn malformed_input_is_an_input_error() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(b"{\"states\": [ {\"dims\": [2, 2],").unwrap();
    let o = run(&["swap", "--input", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
    let missing = run(&["swap", "--input", "fixtures/does_not_exist.json"]);
    assert_eq!(missing.status.code(), Some(2));
}
