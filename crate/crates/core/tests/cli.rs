use std::process::{Command, Output};

fn zlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zlab")).args(args).env_remove("ZLAB_MAX_SIZE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn list_lines_are_name_tab_identity() {
    let o = zlab(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 155);
    assert!(text.lines().all(|l| l.split('\t').count() == 2 && l.contains(" ≈ ")));
    assert!(text.contains("43B23\tx -> ((y -> x) -> z) ≈ (x -> y) -> (x -> z)\n"));
}

#[test]
fn list_rejects_bad_length() {
    assert_eq!(zlab(&["list", "--max-len", "9"]).status.code(), Some(64));
    assert_eq!(zlab(&["list", "--filter", "[a"]).status.code(), Some(64));
}

#[test]
fn check_exit_codes() {
    let o = zlab(&["check", "2_s", "--all-waids"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("2_s: 155/155 pass\n"));
    assert_eq!(zlab(&["check", "T1", "--lemmas"]).status.code(), Some(0));
    let o = zlab(&["check", "A3", "--identity", "43A12"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL 43A12 at "));
    assert_eq!(zlab(&["check", "A3", "--identity", "99Z99"]).status.code(), Some(64));
    assert_eq!(zlab(&["check", "A3", "--variety", "NOPE"]).status.code(), Some(64));
}

#[test]
fn check_loads_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("chain.json");
    std::fs::write(&good, r#"{"name": "chain", "size": 2, "table": [[1, 1], [0, 1]]}"#).unwrap();
    let o = zlab(&["check", good.to_str().unwrap(), "--variety", "BA"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("chain: 1/1 pass"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"size": 2, "table": [[1, 1], [0, 5]]}"#).unwrap();
    assert_eq!(zlab(&["check", bad.to_str().unwrap(), "--lemmas"]).status.code(), Some(65));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(zlab(&["check", bad.to_str().unwrap(), "--lemmas"]).status.code(), Some(65));
}

#[test]
fn find_outputs_algebra_files() {
    let o = zlab(&["find", "--size", "2", "--satisfy", "S", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.ends_with("2 models\n"));
    assert!(text.contains(r#""table":[[0,1],[1,1]]"#));
    let o = zlab(&["find", "--size", "2", "--satisfy", "43A12", "--fail", "43A23"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(r#""table":[[1,1],[0,1]]"#));
    assert_eq!(zlab(&["find", "--size", "2", "--satisfy", "SL", "--fail", "43A12"]).status.code(), Some(1));
}

#[test]
fn find_size_cap() {
    assert_eq!(zlab(&["find", "--size", "5", "--satisfy", "S"]).status.code(), Some(64));
    assert_eq!(zlab(&["find", "--size", "0", "--satisfy", "S"]).status.code(), Some(64));
    let o = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["find", "--size", "3", "--satisfy", "S"])
        .env("ZLAB_MAX_SIZE", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
    let o = Command::new(env!("CARGO_BIN_EXE_zlab"))
        .args(["find", "--size", "2", "--satisfy", "S"])
        .env("ZLAB_MAX_SIZE", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn classify_with_catalog_models() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("h.dot");
    let o = zlab(&["classify", "--models", "2_s", "2_b", "A3", "A4", "--dot", dot.to_str().unwrap(), "--with-landmarks"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("6 blocks, diff: none\n"));
    let dot = std::fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 10);
}

#[test]
fn classify_reports_diff() {
    let o = zlab(&["classify", "--models", "2_s", "2_b"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("diff: "));
    assert_eq!(zlab(&["classify", "--models", "T1"]).status.code(), Some(2));
}

#[test]
fn classify_rejects_non_symmetric_model() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("left_zero.json");
    std::fs::write(&p, r#"{"name": "lz", "size": 2, "table": [[0, 0], [0, 0]]}"#).unwrap();
    assert_eq!(zlab(&["classify", "--models", p.to_str().unwrap()]).status.code(), Some(65));
}

#[test]
fn json_matches_text_fields() {
    let text = stdout(&zlab(&["classify", "--models", "2_s", "2_b", "A3", "A4"]));
    let json = stdout(&zlab(&["--format", "json", "classify", "--models", "2_s", "2_b", "A3", "A4"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let blocks = v["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 6);
    for b in blocks {
        let members: Vec<&str> = b["members"].as_array().unwrap().iter().map(|m| m.as_str().unwrap()).collect();
        let line = format!(
            "rep {:<6} fp {} [{}] {}",
            b["representative"].as_str().unwrap(),
            b["fingerprint"].as_str().unwrap(),
            members.len(),
            members.join(" ")
        );
        assert!(text.contains(&line), "{line}");
    }
    assert_eq!(v["diff"], serde_json::json!([]));
}

#[test]
fn hasse_is_byte_stable_across_threads() {
    let a = zlab(&["--threads", "1", "--format", "dot", "hasse", "--with-landmarks", "--max-size", "3"]);
    let b = zlab(&["--threads", "3", "--format", "dot", "hasse", "--with-landmarks", "--max-size", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("digraph hasse {\n  rankdir=BT;"));
}

#[test]
fn catalog_prints_tables() {
    let o = zlab(&["catalog", "A3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("A3 (size 3)"));
}
