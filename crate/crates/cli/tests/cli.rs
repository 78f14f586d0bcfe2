use std::path::PathBuf;
use std::process::{Command, Output};

use folcris_cli::ProblemFile;
use serde_json::Value;

fn gallery(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gallery").join(name)
}

fn folcris(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_folcris"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("FOLCRIS_THREADS", t),
        None => cmd.env_remove("FOLCRIS_THREADS"),
    };
    cmd.output().unwrap()
}

fn json_report(command: &str, file: &str, extra: &[&str]) -> (i32, Value) {
    let path = gallery(file);
    let mut args = vec![command, path.to_str().unwrap(), "--format", "json"];
    args.extend_from_slice(extra);
    let out = folcris(&args, None);
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v)
}

#[test]
fn bott_check_on_the_plane() {
    let (code, r) = json_report("bott-check", "bott-plane.json", &["--recheck"]);
    assert_eq!(code, 0);
    assert_eq!(r["result"]["certificate"]["phi_form"], "0");
    assert_eq!(r["result"]["certificate"]["monomial_bounds"][0]["bound"], 4);
    assert_eq!(r["recheck"]["passed"], true);
}

#[test]
fn contact_form_is_rejected_with_its_residual() {
    let (code, r) = json_report("check-foliation", "contact.json", &[]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "not-integrable");
    // dy∧dx
    assert_eq!(r["result"]["residuals"][0], "-dx*dy");
}

#[test]
fn foliated_cohomology_of_the_plane() {
    let (code, r) = json_report("foliated-cohomology", "plane-leaves.json", &["--truncate", "5"]);
    assert_eq!(code, 0);
    let h = &r["result"]["cohomology"];
    assert_eq!(h[0]["free_rank"], 7);
    assert_eq!(h[1]["free_rank"], 1);
    assert_eq!(h[1]["generators"][0]["form"], "x^4*dx");
}

#[test]
fn obstructed_lift_exits_one() {
    let (code, r) = json_report("c4-check", "perturbed-c4.json", &["--recheck"]);
    assert_eq!(code, 1);
    assert_eq!(r["status"], "obstruction");
    assert_eq!(r["result"]["valuation"], 1);
    assert_eq!(r["recheck"]["passed"], true);
}

#[test]
fn unmet_hypotheses_exit_one_with_a_report() {
    let dir = tempfile::tempdir().unwrap();
    let src = std::fs::read_to_string(gallery("bott-plane.json")).unwrap().replace("X1^2", "X1");
    let path = dir.path().join("low.json");
    std::fs::write(&path, src).unwrap();
    let out = folcris(&["bott-check", path.to_str().unwrap(), "--format", "json"], None);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["status"], "hypothesis-unmet");
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"schema": "folcris-problem/1", "ring": {"p": 4, "n": 1}, "variety": {"vars": ["x"]}}"#).unwrap();
    let out = folcris(&["derham-cohomology", path.to_str().unwrap(), "--truncate", "2"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ring"));
    let out = folcris(&["derham-cohomology", gallery("torus-derham.json").to_str().unwrap(), "--truncate", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = folcris(&["chern", gallery("torus-derham.json").to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn echoed_problem_round_trips() {
    let (_, r) = json_report("residue", "radial-residue.json", &[]);
    let echoed: ProblemFile = serde_json::from_value(r["problem"].clone()).unwrap();
    let original = ProblemFile::from_json(&std::fs::read_to_string(gallery("radial-residue.json")).unwrap()).unwrap();
    assert_eq!(echoed, original);
    let again: ProblemFile = serde_json::from_str(&echoed.to_json()).unwrap();
    assert_eq!(again, echoed);
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.txt");
    let file = gallery("riccati-t1.json");
    let printed = folcris(&["t1-check", file.to_str().unwrap()], None).stdout;
    let out = folcris(&["t1-check", file.to_str().unwrap(), "--out", target.to_str().unwrap()], None);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), printed);
}

#[test]
fn thread_count_does_not_change_reports() {
    let file = gallery("line-crystalline.json");
    let args = ["crystalline-cohomology", file.to_str().unwrap(), "--format", "json"];
    let one = folcris(&args, Some("1")).stdout;
    let four = folcris(&args, Some("4")).stdout;
    assert_eq!(one, four);
    assert_eq!(folcris(&args, Some("many")).status.code(), Some(2));
}
