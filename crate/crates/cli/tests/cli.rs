//! End-to-end invocations of the binary: flag handling, canonical outputs,
//! exit codes, and byte-identical reruns.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ordlie"))
}

fn stdout_of(args: &[&str]) -> (String, i32) {
    let out = bin().args(args).output().expect("binary runs");
    (
        String::from_utf8_lossy(&out.stdout).into_owned(),
        out.status.code().unwrap_or(-1),
    )
}

#[test]
fn reduce_examples() {
    let (out, code) = stdout_of(&[
        "reduce",
        "--q",
        "5",
        "--r",
        "1/3",
        "--poly",
        "λ^6 - t^2",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("λ^2 - 1"), "got {out}");
    let (out, code) = stdout_of(&[
        "reduce",
        "--q",
        "3",
        "--r",
        "0",
        "--poly",
        "λ^2 - (1+t)",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("λ^2 - 1"));
}

#[test]
fn lift_example() {
    let (out, code) = stdout_of(&[
        "lift",
        "--q",
        "3",
        "--r",
        "1/2",
        "--poly",
        "λ - 1",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("λ^2 - t"), "got {out}");
}

#[test]
fn reduce_precondition_failure_exits_2() {
    // coefficient bound violated: lambda^2 - 1 has no slope 1/2 shape
    let out = bin()
        .args([
            "reduce",
            "--q",
            "3",
            "--r",
            "1/2",
            "--poly",
            "λ^2 - 1",
            "--no-timestamp",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn classify_fixtures_and_nilpotent() {
    let (out, code) = stdout_of(&[
        "classify",
        "--algebra",
        "sp:2",
        "--r",
        "0",
        "--q",
        "3",
        "--fixture",
        "sl2-depth0",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("accepted"));
    assert!(out.contains("λ^2 - 1"));
    let (out, code) = stdout_of(&[
        "classify",
        "--algebra",
        "sp:2",
        "--r",
        "1/2",
        "--q",
        "3",
        "--fixture",
        "sl2-barycenter",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("accepted"));
    // a nilpotent is rejected with a reason, still exit 0
    let (out, code) = stdout_of(&[
        "classify",
        "--algebra",
        "sp:2",
        "--r",
        "0",
        "--q",
        "3",
        "--elem",
        "[[0,1],[0,0]]",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("rejected"));
}

#[test]
fn enum_params_count() {
    let (out, code) = stdout_of(&[
        "enum-params",
        "--algebra",
        "sp:6",
        "--r",
        "1/3",
        "--q",
        "5",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("4 points"), "got {out}");
}

#[test]
fn volume_formula_file() {
    let dir = std::env::temp_dir().join(format!("ordlie-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let formula = dir.join("deep.pas");
    std::fs::write(
        &formula,
        "ord(x11) >= 1 && ord(x12) >= 1 && ord(x21) >= 1 && ord(x22) >= 1\n",
    )
    .unwrap();
    let (out, code) = stdout_of(&[
        "volume",
        "--algebra",
        "sp:2",
        "--q",
        "3",
        "--K",
        "2",
        "--formula-file",
        formula.to_str().unwrap(),
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("[1/27, 1/27]"), "got {out}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn fl_check_passes_and_reruns_identically() {
    let args = [
        "fl-check",
        "--pair",
        "sp:2/sp:2",
        "--r",
        "0",
        "--q",
        "3",
        "--no-timestamp",
    ];
    let (a, code_a) = stdout_of(&args);
    let (b, code_b) = stdout_of(&args);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(a, b, "reruns are not byte-identical");
    assert!(a.contains("1/2"));
    assert!(a.contains("1/4"));
}

#[test]
fn fl_check_rejects_nonzero_slope() {
    let out = bin()
        .args([
            "fl-check", "--pair", "sp:2/sp:2", "--r", "1/2", "--q", "3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_output() {
    let dir = std::env::temp_dir().join(format!("ordlie-csv-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("fl.csv");
    let (_, code) = stdout_of(&[
        "fl-check",
        "--pair",
        "sp:2/sp:2",
        "--r",
        "0",
        "--q",
        "3",
        "--no-timestamp",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    let header = lines.next().unwrap();
    assert!(header.contains("lhs"));
    assert!(lines.count() >= 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn gauss_check_small() {
    let (out, code) = stdout_of(&["gauss-check", "--q", "3", "--K", "2", "--no-timestamp"]);
    assert_eq!(code, 0);
    assert!(out.contains("orbit-sum formula: pass"));
    assert!(out.contains("vanishing off the lattice: pass"));
}

#[test]
fn fourier_check_small() {
    let (out, code) = stdout_of(&[
        "fourier-check",
        "--algebra",
        "sl:2",
        "--q",
        "3",
        "--trials",
        "5",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("double-transform identity: pass"));
    assert!(out.contains("coset-indicator transform: pass"));
}

#[test]
fn mu_fixture_json() {
    let (out, code) = stdout_of(&[
        "mu",
        "--algebra",
        "sp:2",
        "--r",
        "0",
        "--q",
        "3",
        "--fixture",
        "sl2-depth0",
        "--no-timestamp",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("\"algebra\": \"sp:2\""));
    assert!(out.contains("\"R\""));
}
