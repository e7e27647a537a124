use std::io::Write;
use std::process::{Command, Output};

const CORPUS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/corpus.imx");

fn infmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infmat")).args(args).output().unwrap()
}

fn corpus(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--file", CORPUS];
    full.extend_from_slice(args);
    let out = infmat(&full);
    let code = out.status.code().unwrap();
    let json = if code == 0 { serde_json::from_slice(&out.stdout).unwrap() } else { serde_json::Value::Null };
    (code, json)
}

#[test]
fn eval_prints_rational_strings() {
    let (code, v) = corpus(&["eval", "E11", "--rows", "1..2", "--cols", "1..2"]);
    assert_eq!(code, 0);
    assert_eq!(v, serde_json::json!({"grid": [["1", "0"], ["0", "0"]]}));
}

#[test]
fn defined_reports_the_smallest_witness() {
    let (code, v) = corpus(&["defined", "ones_row", "ones_col"]);
    assert_eq!(code, 0);
    assert_eq!(v["defined"], false);
    assert_eq!(v["witness"]["i"], 1);
    assert_eq!(v["witness"]["k"], 1);
    assert_eq!(v["witness"]["family"], serde_json::json!({"start": 2, "step": 1}));
    let (_, v) = corpus(&["defined", "U", "A"]);
    assert_eq!(v, serde_json::json!({"defined": true, "witness": null}));
}

#[test]
fn classify_and_cond_d() {
    let (_, v) = corpus(&["classify", "V", "U", "A"]);
    assert_eq!(v["class"], "G4_NOT_G5");
    assert_eq!(v["evidence"]["kind"], "inequality");
    let (_, v) = corpus(&["classify", "ones_row", "tridiag", "ones_col"]);
    assert_eq!(v["class"], "G2_NOT_G4");
    let (_, v) = corpus(&["cond-d", "shifted_row", "connector", "shifted_col"]);
    assert_eq!(v, serde_json::json!({"holds": true, "witness": null}));
}

#[test]
fn witness_and_solve_check() {
    let (_, v) = corpus(&["witness", "not-link", "U"]);
    assert_eq!(v, serde_json::json!({"none": "row and column finite"}));
    let (_, v) = corpus(&["witness", "not-link", "V"]);
    assert!(v["C"].as_str().unwrap().contains("col_prog j=1 from=1 step=1 value=1"));
    let (_, v) = corpus(&["solve-check", "--v", "lower_ones", "--u", "bidiag", "--a", "V"]);
    assert_eq!(v["verdict"], "ACCEPT");
    let (_, v) = corpus(&["solve-check", "--v", "V", "--u", "U", "--a", "A"]);
    assert_eq!(v["verdict"], "REJECT");
    assert_eq!(v["reason"], "V not row finite");
}

#[test]
fn cross_check_named_and_random() {
    let (code, v) = corpus(&["cross-check", "V", "U", "A", "--n", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["pass"], true);
    let (_, v) = corpus(&["cross-check", "--seed", "3"]);
    assert_eq!(v["pass"], true);
    assert!(v["triple"]["B"].as_str().unwrap().starts_with("matrix B"));
}

#[test]
fn usage_errors_exit_with_one() {
    let out = infmat(&["--file", CORPUS, "classify", "V", "W", "A"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("`W`"));
    assert_eq!(infmat(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(infmat(&["--file", CORPUS, "eval", "V", "--rows", "3..1"]).status.code(), Some(1));
    assert_eq!(infmat(&["--file", "/nonexistent/file.imx", "eval", "V"]).status.code(), Some(1));

    let mut f = std::env::temp_dir();
    f.push(format!("infmat-cli-{}.imx", std::process::id()));
    std::fs::File::create(&f).unwrap().write_all(b"matrix A {\n  cell i=0 j=1 value=1\n}\n").unwrap();
    let out = infmat(&["--file", f.to_str().unwrap(), "eval", "A"]);
    std::fs::remove_file(&f).unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:8"));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(infmat(&["--help"]).status.code(), Some(0));
}
