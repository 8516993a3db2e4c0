//! The command-line interface: outputs, exit codes and the cache.

use std::process::{Command, Output};

fn blochlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(args)
        .env_remove("BLOCHLAB_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn bloch_reports() {
    let o = blochlab(&["bloch", "gf:4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(
        v["results"][0]["certificate"]["groups"]["k2m_symbolic"]["invariant_factors"],
        serde_json::json!([])
    );
    let v = json(&blochlab(&["bloch", "zmod:8"]));
    assert_eq!(
        v["results"][0]["certificate"]["groups"]["pre_bloch"]["invariant_factors"],
        serde_json::json!([])
    );
    assert_eq!(blochlab(&["bloch", "gf:banana"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = blochlab(&["verify", "lemma11", "gf:5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["results"][0]["certificate"]["pairs"], 6);
    let o = blochlab(&["verify", "section4", "gf:4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("verify section4 gf:4,pass,\"2 values of a"),
        "{}",
        stdout(&o)
    );
    assert_eq!(
        blochlab(&["verify", "lemma53", "gf:7", "--max-torus", "16"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(blochlab(&["verify", "lemma99", "gf:7"]).status.code(), Some(2));
    assert_eq!(blochlab(&["verify", "lemma35", "gl2:gf:2"]).status.code(), Some(2));
}

#[test]
fn homology_command() {
    let o = blochlab(&["homology", "cyclic:2", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "job,verdict,summary\nhomology cyclic:2 3,pass,[2]\n");
    let o = blochlab(&["homology", "gl2:gf:2", "3"]);
    assert_eq!(
        json(&o)["results"][0]["certificate"]["invariant_factors"],
        serde_json::json!([6])
    );
    let o = blochlab(&["homology", "gl2:gf:2", "3", "Z/3"]);
    assert_eq!(
        json(&o)["results"][0]["certificate"]["invariant_factors"],
        serde_json::json!([3])
    );
    let o = blochlab(&["homology", "gl2:gf:4", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("180^4"));
    assert_eq!(blochlab(&["homology", "cyclic:2", "3", "Q"]).status.code(), Some(2));
}

#[test]
fn ring_commands() {
    let v = json(&blochlab(&["ring", "info", "dual:gf:3"]));
    assert_eq!(v["results"][0]["certificate"]["size"], 9);
    let v = json(&blochlab(&["ring", "list"]));
    assert_eq!(v["results"].as_array().unwrap().len(), 11);
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_blochlab"))
            .args(["verify", "delta3", "gf:7"])
            .env("BLOCHLAB_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    let hash = json(&first)["config_hash"].as_str().unwrap().to_string();
    let list = Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(["report", "list", "--cache"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(stdout(&list).contains(&hash));
    let show = Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(["report", "show", &hash, "--cache"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(show.stdout, first.stdout);
    assert_eq!(blochlab(&["report", "list"]).status.code(), Some(2));
}
