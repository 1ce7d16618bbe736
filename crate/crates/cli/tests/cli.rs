use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn multab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn gen_to(dir: &TempDir, name: &str, args: &[&str]) -> String {
    let path = p(dir, name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", &path]);
    let o = multab(&full);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

#[test]
fn gen_complete_has_nine_pairs() {
    let o = multab(&["gen", "complete", "3", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("bigraph 3 3 9\n"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn gen_star_and_families() {
    let text = stdout(&multab(&["gen", "star", "6"]));
    assert!(text.starts_with("bigraph 1 6 6\n"));
    for args in [["path", "5"], ["cycle", "6"], ["matching", "4"]] {
        let o = multab(&["gen", args[0], args[1]]);
        assert!(o.status.success(), "{args:?}");
        multab::BipartiteMultigraph::parse(&stdout(&o)).unwrap();
    }
}

#[test]
fn gen_random_is_deterministic() {
    let a = multab(&["gen", "random", "5", "5", "0.5", "--seed", "7"]);
    let b = multab(&["gen", "random", "5", "5", "0.5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let g = multab::BipartiteMultigraph::parse(&text).unwrap();
    assert_eq!(g.to_text(), text);
}

#[test]
fn gen_rejects_bad_params() {
    assert_eq!(
        multab(&["gen", "complete", "0", "3"]).status.code(),
        Some(2)
    );
    assert_eq!(multab(&["gen", "cycle", "5"]).status.code(), Some(2));
    assert_eq!(
        multab(&["gen", "random", "3", "3", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(multab(&["gen", "wheel", "3"]).status.code(), Some(2));
}

#[test]
fn certify_then_verify() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k88.txt", &["complete", "8", "8"]);
    let cert = p(&dir, "cert.json");
    let stats = p(&dir, "stats.json");
    let o = multab(&["certify", &graph, "--out", &cert, "--stats", &stats]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.contains("m = 64"), "{summary}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(doc["entries"].as_array().unwrap().len() >= 9);
    assert_eq!(doc["profile"], "scaled");
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    assert_eq!(stats["m"], 64);

    let o = multab(&["verify", &graph, &cert]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn certify_roundtrip_on_random_graphs() {
    let dir = TempDir::new().unwrap();
    for seed in ["1", "2", "3"] {
        for profile in ["scaled", "paper"] {
            let graph = gen_to(
                &dir,
                "g.txt",
                &["random", "12", "15", "0.4", "--seed", seed],
            );
            let cert = p(&dir, "c.json");
            let o = multab(&["certify", &graph, "--profile", profile, "--out", &cert]);
            assert!(o.status.success(), "{}", stderr(&o));
            assert!(multab(&["verify", &graph, &cert]).status.success());
        }
    }
}

#[test]
fn certify_edgeless_graph() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "e.txt");
    std::fs::write(&graph, "bigraph 3 4 0\n").unwrap();
    let o = multab(&["certify", &graph]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0]["size"], 0);
}

#[test]
fn certify_max_entries() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k.txt", &["complete", "5", "5"]);
    let o = multab(&["certify", &graph, "--max-entries", "4"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["entries"].as_array().unwrap().len(), 4);
}

#[test]
fn certify_malformed_file() {
    let dir = TempDir::new().unwrap();
    let graph = p(&dir, "bad.txt");
    std::fs::write(&graph, "bigraph 2 2 1\n0 5 1\n").unwrap();
    let o = multab(&["certify", &graph]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
    assert_eq!(
        multab(&["certify", &p(&dir, "missing.txt")]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_rejects_corrupted_size() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k.txt", &["complete", "4", "4"]);
    let cert = p(&dir, "c.json");
    assert!(multab(&["certify", &graph, "--out", &cert])
        .status
        .success());
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let last = doc["entries"].as_array().unwrap().len() - 1;
    doc["entries"][last]["size"] = serde_json::json!(1000);
    let bad = p(&dir, "bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let o = multab(&["verify", &graph, &bad]);
    assert!(!o.status.success());
    assert!(
        stderr(&o).contains(&format!("entry {last} claims size 1000")),
        "{}",
        stderr(&o)
    );
}

#[test]
fn verify_rejects_other_graph() {
    let dir = TempDir::new().unwrap();
    let a = gen_to(&dir, "a.txt", &["complete", "3", "3"]);
    let b = gen_to(&dir, "b.txt", &["path", "6"]);
    let cert = p(&dir, "c.json");
    assert!(multab(&["certify", &a, "--out", &cert]).status.success());
    let o = multab(&["verify", &b, &cert]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("certificate is for graph"));
}

#[test]
fn oracle_prints_sorted_sizes() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k22.txt", &["complete", "2", "2"]);
    let o = multab(&["oracle", &graph]);
    assert_eq!(stdout(&o), "0 1 2 4\n");
}

#[test]
fn oracle_budget_is_named() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k.txt", &["complete", "6", "7"]);
    let o = multab(&["oracle", &graph, "--budget", "5"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("oracle subset sweep"));
    let big = gen_to(&dir, "big.txt", &["complete", "25", "25"]);
    assert_eq!(multab(&["oracle", &big]).status.code(), Some(4));
}

#[test]
fn table_rows() {
    let o = multab(&["table", "1", "100"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 101);
    assert!(lines[10].starts_with("10,42,"));
    assert_eq!(multab(&["table", "1", "200000"]).status.code(), Some(4));
    assert_eq!(
        multab(&["table", "1", "50", "--budget", "20"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn conjecture_small() {
    let o = multab(&["conjecture", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("m = 4: min |M| = 4"), "{text}");
    assert!(text.contains("  2x2: 0-0 0-1 1-0 1-1"));
    assert_eq!(multab(&["conjecture", "13"]).status.code(), Some(4));
}

#[test]
fn lemmas_small_all_pass() {
    let o = multab(&["lemmas", "--sweep", "small"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 6);
    assert!(text.lines().all(|l| l.contains(", 0 violations")), "{text}");
}

#[test]
fn thread_cap() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(&dir, "k.txt", &["complete", "3", "3"]);
    let o = Command::new(env!("CARGO_BIN_EXE_multab"))
        .args(["oracle", &graph])
        .env("MULTAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "0 1 2 3 4 6 9\n");
    let o = Command::new(env!("CARGO_BIN_EXE_multab"))
        .args(["oracle", &graph])
        .env("MULTAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(multab(&[]).status.code(), Some(2));
    assert_eq!(multab(&["certify"]).status.code(), Some(2));
    assert_eq!(
        multab(&["lemmas", "--profile", "wild"]).status.code(),
        Some(2)
    );
    assert!(Path::new(env!("CARGO_BIN_EXE_multab")).exists());
}
