//! Golden-file cases for the command-line tool. Each case stores stdout,
//! stderr and the exit code in `tests/golden/<name>.txt`; run with
//! `UPDATE_GOLDEN=1` to rewrite them.

use std::fs;
use std::path::PathBuf;

pub struct Case {
    pub name: &'static str,
    pub args: &'static str,
    pub code: i32,
}

const fn case(name: &'static str, args: &'static str, code: i32) -> Case {
    Case { name, args, code }
}

pub const CASES: &[Case] = &[
    case("eval_abs", "eval tests/fixtures/abs.ncx --at 0.5", 0),
    case("eval_abs_negative_json", "eval tests/fixtures/abs.ncx --at -0.25 --format json", 0),
    case("eval_cantor_grid", "eval tests/fixtures/cantor.ncx --grid 7", 0),
    case("deriv_abs_left", "deriv tests/fixtures/abs.ncx --order 1 --at 0 --side left", 0),
    case("deriv_too_high", "deriv tests/fixtures/abs.ncx --order 2 --at 0.3", 2),
    case("classify_abs", "classify tests/fixtures/abs.ncx", 0),
    case("classify_strong", "classify tests/fixtures/strong.ncx", 0),
    case("measure_mixed", "measure tests/fixtures/mixed.ncx", 0),
    case("reanchor_abs", "reanchor tests/fixtures/abs.ncx --xi 0.5", 0),
    case("reanchor_endpoint", "reanchor tests/fixtures/abs.ncx --xi 1", 2),
    case("decompose_monotone_mixed", "decompose monotone tests/fixtures/mixed.ncx", 0),
    case("decompose_lebesgue_mixed", "decompose lebesgue tests/fixtures/mixed.ncx --format json", 0),
    case("compare_true", "compare tests/fixtures/f.ncx tests/fixtures/g.ncx", 0),
    case("compare_false", "compare tests/fixtures/g.ncx tests/fixtures/f.ncx", 1),
    case("compare_order_mismatch", "compare tests/fixtures/f.ncx tests/fixtures/cantor.ncx", 2),
    case("lattice_max", "lattice max tests/fixtures/f.ncx tests/fixtures/abs.ncx", 0),
    case("lattice_min", "lattice min tests/fixtures/f.ncx tests/fixtures/abs.ncx", 0),
    case("strong_full", "strong tests/fixtures/strong.ncx --modulus 2", 0),
    case("strong_gap", "strong tests/fixtures/gap.ncx --modulus 1", 1),
    case("strong_bad_modulus", "strong tests/fixtures/strong.ncx --modulus -1", 2),
    case("support_cubic", "support tests/fixtures/cubic.ncx --nodes 0.25:2,0.75:1", 0),
    case("support_relative", "support tests/fixtures/f.ncx --nodes 0.5:2 --against tests/fixtures/g.ncx", 0),
    case("support_precondition", "support tests/fixtures/g.ncx --nodes 0.5:2 --against tests/fixtures/f.ncx", 1),
    case("support_bad_sum", "support tests/fixtures/abs.ncx --nodes 0.5:1", 2),
    case("oracle_pass", "oracle tests/fixtures/mixed.ncx --trials 500 --seed 42", 0),
    case("oracle_fail", "oracle tests/fixtures/g.ncx --minus tests/fixtures/f.ncx --seed 7", 1),
    case("malformed_unknown_field", "eval tests/fixtures/unknown_field.ncx --at 0", 2),
    case("malformed_missing_density", "eval tests/fixtures/missing_density.ncx --at 0", 2),
    case("malformed_syntax", "eval tests/fixtures/syntax_error.ncx --at 0", 2),
    case("malformed_negative_mass", "eval tests/fixtures/negative_mass.ncx --at 0", 2),
    case("missing_file", "eval tests/fixtures/nope.ncx", 2),
    case("out_of_domain", "eval tests/fixtures/abs.ncx --at 3", 2),
    case("unknown_command", "frobnicate tests/fixtures/abs.ncx", 2),
];

pub fn run(args: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("nconvex").chain(args.split_whitespace());
    let code = nconvex::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn render(code: i32, out: &str, err: &str) -> String {
    format!("{out}--- stderr\n{err}--- exit {code}\n")
}

fn path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.txt"))
}

/// Run one case against its golden file; `Err` describes the mismatch.
pub fn check(case: &Case) -> Result<(), String> {
    let (code, out, err) = run(case.args);
    let actual = render(code, &out, &err);
    let file = path(case.name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&file, &actual).map_err(|e| e.to_string())?;
    }
    if code != case.code {
        return Err(format!("{}: exit {code}, expected {}\n{actual}", case.name, case.code));
    }
    let expected = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
    if expected != actual {
        return Err(format!("{}: output differs from golden file\n--- expected\n{expected}--- actual\n{actual}", case.name));
    }
    Ok(())
}
