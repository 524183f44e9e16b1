use std::process::Command;

fn entropic(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_entropic"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn zero_trials_is_a_usage_error() {
    let (code, _, err) = entropic(&["verify", "--trials", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("--trials"));
}

#[test]
fn unknown_relation_is_a_usage_error() {
    let (code, _, err) = entropic(&["verify", "--relations", "nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown relation"));
}

#[test]
fn double_log_variant_is_reported_not_failed() {
    let (code, out, _) = entropic(&[
        "verify",
        "--trials",
        "1",
        "--seed",
        "7",
        "--relations",
        "eq17-as-printed",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains(
        "counterexample relation=nomem-mm-double-log state=|0><0| bases=computational,hadamard \
         lhs=1.000000000000e+00 rhs=2.000000000000e+00"
    ));
}

#[test]
fn werner_sweep_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("werner.csv");
    let (code, stdout, _) = entropic(&[
        "werner-sweep",
        "--eta-steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("eta,mm,md,dd,cond\n0.000000000000e+00,2.000000000000e+00,"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 6);
    assert!(csv.contains("# status=pass"));
}

#[test]
fn unwritable_output_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let (code, _, err) = entropic(&[
        "bloch-sweep",
        "--r3-steps",
        "3",
        "--theta-steps",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot write"));
}

#[test]
fn one_step_sweep_exits_2() {
    assert_eq!(entropic(&["werner-sweep", "--eta-steps", "1"]).0, 2);
}

#[test]
fn eval_bell_state_text_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bell.json");
    std::fs::write(
        &path,
        r#"{"state": {"dims": [2, 2], "matrix": [
            [[0.5,0],[0,0],[0,0],[0.5,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0,0],[0,0],[0,0],[0,0]],
            [[0.5,0],[0,0],[0,0],[0.5,0]]]},
           "measurements": [{"theta": 0, "phi": 0}, {"pi2": true}]}"#,
    )
    .unwrap();
    let (code, out, _) = entropic(&[
        "eval",
        path.to_str().unwrap(),
        "--format",
        "text",
        "--relations",
        "uncertainty-disturbance,dd",
    ]);
    assert_eq!(code, 0, "{out}");
    let first = out.lines().next().unwrap();
    assert!(first.trim_start().starts_with("relation"));
    assert!(out.contains("uncertainty-disturbance[0]"));
    assert!(out.contains("dd[0,1]"));
}

#[test]
fn eval_invalid_trace_exits_2_with_residual() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"state": {"dims": [2], "matrix": [[[0.6,0],[0,0]],[[0,0],[0.6,0]]]}, "measurements": []}"#,
    )
    .unwrap();
    let (code, _, err) = entropic(&["eval", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("trace") && err.contains("0.2"), "{err}");
}

#[test]
fn eval_missing_file_exits_2() {
    let (code, _, err) = entropic(&["eval", "/definitely/not/here.json"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot read"));
}

#[test]
fn eval_exit_code_tracks_asserted_rows() {
    // zero tolerance turns identities that hold only to rounding into misses
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    std::fs::write(&path, r#"{"state": {"werner": 0.3}, "measurements": [{"theta": 1.1, "phi": 0.4}, {"pi2": true}]}"#).unwrap();
    let (code, out, _) = entropic(&["eval", path.to_str().unwrap(), "--tol", "0"]);
    let violated = out
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').collect::<Vec<_>>())
        .any(|cols| cols[2] == "true" && cols[6] == "false");
    assert_eq!(code, if violated { 1 } else { 0 }, "{out}");
    assert!(out.contains(if violated {
        "# result=fail"
    } else {
        "# result=pass"
    }));
}

#[test]
fn negative_tolerance_exits_2() {
    assert_eq!(entropic(&["werner-sweep", "--tol", "-1"]).0, 2);
}
