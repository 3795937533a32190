use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ternalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ternalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../golden/jtable_n2.json")
        .to_string_lossy()
        .into_owned()
}

#[test]
fn classify_reports_the_theorem_shape_and_is_thread_independent() {
    let args = ["classify", "--confirm", "3", "--trials", "3"];
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_ternalg"))
            .args(args)
            .env("TERNALG_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let two = run("2");
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    let v = json(&one);
    assert_eq!(v["total"], 7560);
    assert_eq!(v["first_kind"].as_array().unwrap().len(), 0);
    let shape: Vec<&str> = v["second_kind_theorem_shape"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    assert_eq!(
        shape,
        [
            "A[i,j,p] B[q,r,p] C[q,r,k]",
            "A[i,j,p] B[q,r,p] C[r,q,k]",
            "A[i,p,q] B[r,p,q] C[r,j,k]",
            "A[i,p,q] B[r,q,p] C[r,j,k]",
        ]
    );
    assert!(String::from_utf8_lossy(&one.stderr).contains("seed"));
}

#[test]
fn classify_csv_has_a_header_and_one_row_per_survivor() {
    let out = ternalg(&[
        "classify",
        "--confirm",
        "3",
        "--trials",
        "2",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().contains("pattern"));
    assert!(lines.count() > 0);
}

#[test]
fn golden_comparison_exits_one_with_three_mismatches() {
    let out = ternalg(&["table", "--bracket", "j", "--golden", &golden()]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["rows"], 112);
    let rows: Vec<u64> = v["mismatches"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m["row"].as_u64().unwrap())
        .collect();
    assert_eq!(rows, [72, 105, 112]);
}

#[test]
fn span_reports_stay_in_the_claimed_span() {
    for (bracket, zero) in [("j", 98), ("j2", 98), ("anti", 60)] {
        let out = ternalg(&["table", "--bracket", bracket, "--span"]);
        assert!(out.status.success(), "{bracket}");
        let v = json(&out);
        assert_eq!(v["total"], 512);
        assert_eq!(v["outside"], 0);
        assert_eq!(v["zero"], zero);
    }
}

#[test]
fn table_csv_lists_every_triple() {
    let out = ternalg(&["table", "--bracket", "anti", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 513);
}

#[test]
fn check_assoc_exit_code_follows_the_requested_kind() {
    let circ = ternalg(&["check-assoc", "--pattern", "circ", "--kind", "first"]);
    assert_eq!(circ.status.code(), Some(1));
    let t1 = ternalg(&["check-assoc", "--pattern", "t1", "--kind", "second"]);
    assert!(t1.status.success());
    let text = ternalg(&["check-assoc", "--pattern", "A[p,i,q] B[q,j,r] C[r,k,p]"]);
    assert!(text.status.success());
    let v = json(&text);
    assert_eq!(v["relations"].as_array().unwrap().len(), 5);
    assert!(v["relations"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["status"] == "fails"));
}

#[test]
fn decompose_writes_three_components() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("a.json");
    std::fs::write(
        &input,
        r#"{"n":2,"entries":[[1,1,2,"1"],[2,1,1,"3"],[2,2,2,"w"]]}"#,
    )
    .unwrap();
    let out = ternalg(&["decompose", "--input", input.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(json(&out)["sum_equals_input"], true);
    for class in ["j_skew", "j2_skew", "cyclic_symmetric"] {
        let file = dir.path().join(format!("a.{class}.json"));
        let text = std::fs::read_to_string(&file).unwrap();
        assert!(
            serde_json::from_str::<Value>(&text).unwrap()["n"] == 2,
            "{class}"
        );
    }
}

#[test]
fn structure_emits_one_based_constants() {
    let out = ternalg(&["structure", "--pattern", "circ", "--order", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["r"], 8);
    assert!(v["C"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c[0].as_u64().unwrap() >= 1));
}

#[test]
fn lie_and_pauli_succeed() {
    let lie = ternalg(&["lie", "--samples", "5"]);
    assert!(lie.status.success());
    let checks = json(&lie)["checks"].as_array().unwrap().clone();
    assert!(checks
        .iter()
        .filter(|c| c["sigma"] != "literal")
        .all(|c| c["status"] != "fails"));
    let pauli = ternalg(&["pauli"]);
    assert!(pauli.status.success());
    assert!(json(&pauli)["cases"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["equals_2_i_sigma"] == true));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ternalg(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(ternalg(&["lie", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(
        ternalg(&["check-assoc", "--pattern", "nonsense"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ternalg(&["decompose", "--input", "/nonexistent/x.json"])
            .status
            .code(),
        Some(2)
    );
}
