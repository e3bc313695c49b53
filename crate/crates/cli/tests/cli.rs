#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use readme_taxonomy::corpus::{render_annotations, TSV_HEADER};
use support::generators::planted_corpus;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_readme-taxonomy"));
    cmd.env_remove("GITHUB_TOKEN").env("RUST_LOG", "warn");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_corpus(dir: &Path, sections: usize) -> PathBuf {
    let path = dir.join("annotations.tsv");
    std::fs::write(&path, render_annotations(&planted_corpus(sections, 1))).unwrap();
    path
}

const README: &str = "# Project\n\nSome intro.\n\n## Setup\n\ninstallation3 foxtrot installation12\n\n## Team\n\nmaintainers4 and maintainers9\n";

#[test]
fn missing_input_is_a_usage_error() {
    let out = run(&["train", "--annotations", "/nonexistent/a.tsv", "--out", "/tmp/m.json"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/a.tsv"));
    assert_eq!(code(&run(&["train"])), 2);
}

#[test]
fn fetch_without_token_explains_itself() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["fetch", "--count", "1", "--out", s(dir.path())]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("GITHUB_TOKEN"));
}

#[test]
fn train_label_strip() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = write_corpus(dir.path(), 160);
    let model = dir.path().join("model.json");
    let out = run(&["train", "--annotations", s(&tsv), "--out", s(&model), "--seed", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("sections   160"));

    let readme = dir.path().join("README.md");
    std::fs::write(&readme, README).unwrap();
    let out = run(&["label", "--model", s(&model), "--readme", s(&readme), "--style", "tag"]);
    assert_eq!(code(&out), 0);
    let labeled = stdout(&out);
    assert!(labeled.contains("## Setup [How"), "{labeled}");
    assert!(labeled.contains("## Team [") && labeled.contains("Who"), "{labeled}");

    let again_path = dir.path().join("labeled.md");
    std::fs::write(&again_path, &labeled).unwrap();
    let twice = stdout(&run(&["label", "--model", s(&model), "--readme", s(&again_path), "--style", "tag"]));
    assert_eq!(twice, labeled);
    let stripped = stdout(&run(&["label", "--strip", "--readme", s(&again_path)]));
    assert_eq!(stripped, README);

    let shields = stdout(&run(&["label", "--model", s(&model), "--readme", s(&readme)]));
    assert!(shields.contains("https://img.shields.io/badge/-How-green"), "{shields}");

    let out = run(&["features", "--model", s(&model), "--readme", s(&readme), "--section", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.starts_with("section 1: level 2 \"Setup\"") && text.contains("installation3"), "{text}");
    assert_eq!(code(&run(&["features", "--model", s(&model), "--readme", s(&readme), "--section", "9"])), 2);
}

#[test]
fn corrupt_model_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    std::fs::write(&model, "{\"schema_version\": 1").unwrap();
    let readme = dir.path().join("README.md");
    std::fs::write(&readme, README).unwrap();
    assert_eq!(code(&run(&["label", "--model", s(&model), "--readme", s(&readme)])), 2);
}

#[test]
fn rules_tables() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.tsv");
    std::fs::write(&empty, format!("{TSV_HEADER}\n")).unwrap();
    let out = run(&["rules", "--annotations", s(&empty)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 1);

    let tsv = write_corpus(dir.path(), 100);
    let out = run(&["rules", "--annotations", s(&tsv), "--level", "section", "--min-count", "5", "--json"]);
    assert_eq!(code(&out), 0);
    let rules: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(rules.is_array());
    let out = run(&["rules", "--annotations", s(&tsv), "--min-support", "1.5"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn extract_writes_unlabeled_rows() {
    let dir = tempfile::tempdir().unwrap();
    let readme = dir.path().join("octo__tool.md");
    std::fs::write(&readme, README).unwrap();
    let out = run(&["extract", "--input", s(&readme)]);
    assert_eq!(code(&out), 0);
    let rows = readme_taxonomy::corpus::parse_annotations(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1].file_id, "octo__tool");
    assert_eq!(rows[1].heading_markdown, "## Setup");
    assert!(rows.iter().all(|r| r.labels.is_empty()));
}

#[test]
fn evaluate_prints_a_table_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let tsv = write_corpus(dir.path(), 80);
    let report = dir.path().join("report.json");
    let out = run(&["evaluate", "--annotations", s(&tsv), "--folds", "4", "--ablation", "--report", s(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("statistical") && text.contains("heuristic"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["ablation"].as_array().unwrap().len(), 3);
    assert!(json["report"]["weighted_f1"].as_f64().unwrap() > 0.5);
}
