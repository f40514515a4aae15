use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn gen(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gen"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .unwrap();
    (
        out.status.success(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn acquire_then_generate() {
    let dir = tempfile::tempdir().unwrap();
    let patterns = dir.path().join("patterns.json");
    let questions = dir.path().join("questions.json");
    let (ok, stdout, stderr) = gen(&[
        "acquire",
        "--seeds",
        s(&fixture("worked_example/seeds.json")),
        "--corpus",
        s(&fixture("worked_example/corpus.json")),
        "--resources",
        s(&fixture("resources")),
        "--out",
        s(&patterns),
    ]);
    assert!(ok, "{stderr}");
    assert_eq!(stdout.trim(), "1");
    let (ok, _, stderr) = gen(&[
        "generate",
        "--patterns",
        s(&patterns),
        "--corpus",
        s(&fixture("worked_example/corpus.json")),
        "--strategies",
        "strict",
        "--resources",
        s(&fixture("resources")),
        "--out",
        s(&questions),
    ]);
    assert!(ok, "{stderr}");
    let qs: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&questions).unwrap()).unwrap();
    assert!(qs
        .iter()
        .any(|q| q["text"].as_array().unwrap().iter().map(|t| t.as_str().unwrap()).collect::<Vec<_>>().join(" ")
            == "Who created the telephone ?"));
}

#[test]
fn simulate_prints_both_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let (ok, stdout, stderr) = gen(&[
        "simulate",
        "--corpus",
        s(&fixture("synthetic/corpus.json")),
        "--seeds",
        s(&fixture("synthetic/seeds.json")),
        "--reference",
        s(&fixture("synthetic/reference.json")),
        "--resources",
        s(&fixture("resources")),
        "--batch-size",
        "10",
        "--strategy",
        "wma",
        "--sim",
        "lev",
        "--th",
        "0.8",
        "--penalty",
        "0.2",
        "--bonus",
        "0.1",
        "--shuffle-seed",
        "1",
        "--oracle",
        "reference",
        "--top",
        "5,10",
        "--out",
        s(&out),
    ]);
    assert!(ok, "{stderr}");
    assert!(stdout.contains("edit avg"));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["report"]["stats"].as_array().unwrap().len(), 3);
    assert_eq!(report["report"]["topn"].as_array().unwrap().len(), 2);
}

#[test]
fn evaluate_scores_identical_hypotheses_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let hyp = dir.path().join("hyp.json");
    let reference = dir.path().join("ref.json");
    std::fs::write(
        &hyp,
        r#"[{"sentence_id":"s1","question":"Who invented the telephone ?"}]"#,
    )
    .unwrap();
    std::fs::write(
        &reference,
        r#"{"schema_version":1,"references":{"s1":["Who invented the telephone ?"]}}"#,
    )
    .unwrap();
    let (ok, stdout, stderr) = gen(&[
        "evaluate",
        "--hypotheses",
        s(&hyp),
        "--reference",
        s(&reference),
        "--metrics",
        "bleu1,bleu4,rouge",
        "--top",
        "1",
    ]);
    assert!(ok, "{stderr}");
    let row = stdout.lines().nth(1).unwrap();
    assert_eq!(row, "1\t1\t1.0000\t1.0000\t1.0000");

    let (ok, _, stderr) = gen(&["evaluate", "--hypotheses", s(&hyp), "--reference", s(&reference), "--metrics", "gms"]);
    assert!(!ok);
    assert!(stderr.contains("--embeddings"));
}

#[test]
fn missing_pattern_file_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let (ok, _, stderr) = gen(&[
        "generate",
        "--patterns",
        s(&dir.path().join("none.json")),
        "--corpus",
        s(&fixture("worked_example/corpus.json")),
        "--out",
        s(&dir.path().join("q.json")),
    ]);
    assert!(!ok);
    assert!(stderr.contains("none.json"));
}
