mod common;

use common::golden::{check, run, CASES};
use nconvex::document::Document;

#[test]
fn golden_outputs() {
    let failures: Vec<String> = CASES.iter().filter_map(|c| check(c).err()).collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn every_exit_code_is_exercised() {
    for code in [0, 1, 2] {
        assert!(CASES.iter().any(|c| c.code == code), "no case exits with {code}");
    }
}

#[test]
fn oracle_is_deterministic_under_seed() {
    let args = "oracle tests/fixtures/cantor.ncx --trials 200 --seed 42 --format json";
    assert_eq!(run(args), run(args));
}

#[test]
fn reanchored_document_reloads() {
    let (code, out, _) = run("reanchor tests/fixtures/mixed.ncx --xi 0.5");
    assert_eq!(code, 0);
    let doc = Document::parse(&out).unwrap();
    assert_eq!(doc.xi, 0.5);
    let orig = Document::load("tests/fixtures/mixed.ncx".as_ref()).unwrap().to_form().unwrap();
    let back = doc.to_form().unwrap();
    for i in 1..100 {
        let x = 0.02 * i as f64;
        let (u, v) = (orig.evaluate(x).unwrap(), back.evaluate(x).unwrap());
        assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0), "{x}: {u} vs {v}");
    }
}

#[test]
fn csv_output_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("grid.csv");
    let args = format!("eval tests/fixtures/abs.ncx --grid 3 --csv {}", file.display());
    let (code, _, _) = run(&args);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(file).unwrap();
    assert_eq!(text, "x,value\n-0.5,0.5\n0,0\n0.5,0.5\n");
}
