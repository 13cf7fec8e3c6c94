use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn cdod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdod")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const BROKEN: &str = "config broken {
  cd.emptyOM = invalid; cd.attributes = complete; cd.classes = complete;
  od.emptyOM = invalid; od.objects = incomplete; od.links = complete;
  od.attributes = complete; od.types = complete; od.typing = strict;
}";

#[test]
fn check_exit_codes_follow_verdicts() {
    let (cd, od) = (fixture("cd2.cd"), fixture("od2.od"));
    let ok = cdod(&["check", path(&cd), path(&od), "elicit.cfg"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("dana:Mgr"));
    let no = cdod(&["check", path(&cd), path(&od), "testing.cfg"]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn broken_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("broken.cfg");
    std::fs::write(&cfg, BROKEN).unwrap();
    let out = cdod(&["check", path(&fixture("cd1.cd")), path(&fixture("od1.od")), cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("constraint (2)"));
    let out = cdod(&["configs", "validate", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn parse_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let cd = dir.path().join("bad.cd");
    std::fs::write(&cd, "classdiagram X { class A").unwrap();
    let out = cdod(&["check", cd.to_str().unwrap(), path(&fixture("od1.od")), "elicit"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn witness_files_and_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.od");
    let out = cdod(&[
        "check",
        path(&fixture("cd2.cd")),
        path(&fixture("od2.od")),
        "elicit",
        "--engine",
        "both",
        "--json",
        "--witness",
        w.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["agree"], true);
    for run in report["runs"].as_array().unwrap() {
        assert_eq!(run["verdict"], "CONSISTENT");
        for key in ["config", "scope", "exhaustive", "stats", "witness", "diagnostics"] {
            assert!(run.get(key).is_some(), "missing {key}");
        }
    }
    let text = std::fs::read_to_string(&w).unwrap();
    assert!(text.starts_with("witness"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.od.json")).unwrap()).unwrap();
    assert_eq!(json["objects"].as_array().unwrap().len(), 4);
}

#[test]
fn sweep_has_a_row_per_configuration() {
    let out = cdod(&["sweep", path(&fixture("cd2.cd")), path(&fixture("od2.od")), "--oracle", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().filter(|l| l.len() > 9 && l.as_bytes()[..9].iter().all(|b| b"01".contains(b))).collect();
    assert_eq!(rows.len(), 144);
    assert!(rows.iter().any(|r| r.starts_with("111111010  CONSISTENT")));
    assert!(rows.iter().any(|r| r.starts_with("111111111  INCONSISTENT")));
    assert!(text.contains("oracle disagreements: 0"));
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(sorted, rows);
}

#[test]
fn sweep_over_empty_diagram() {
    let out = cdod(&["sweep", path(&fixture("cd1.cd")), path(&fixture("empty.od")), "--json"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows.len(), 144);
    for r in rows {
        let key = r["config"].as_str().unwrap().as_bytes().to_vec();
        // cd.emptyOM and od.objects positions
        if key[4] == b'1' {
            let expected = if key[0] == b'1' { "INCONSISTENT" } else { "CONSISTENT" };
            assert_eq!(r["verdict"], expected, "{r}");
        }
    }
}

#[test]
fn emit_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.als"), dir.path().join("b.als"));
    for p in [&a, &b] {
        let out = cdod(&["emit", path(&fixture("cd2.cd")), path(&fixture("od2.od")), "elicit", "-o", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(text).unwrap().contains("pred od2"));
    let cfg = dir.path().join("broken.cfg");
    std::fs::write(&cfg, BROKEN).unwrap();
    let out = cdod(&["emit", path(&fixture("cd2.cd")), path(&fixture("od2.od")), cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn configs_commands() {
    assert_eq!(stdout(&cdod(&["configs", "count"])).trim(), "144");
    assert_eq!(stdout(&cdod(&["configs", "list"])).lines().count(), 144);
    let out = cdod(&["configs", "validate", "testing.cfg"]);
    assert_eq!((out.status.code(), stdout(&out).trim().to_string()), (Some(0), "valid".to_string()));
}

#[test]
fn dimacs_export() {
    let out = cdod(&["dimacs", path(&fixture("cd1.cd")), path(&fixture("od1.od")), "elicit"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).lines().any(|l| l.starts_with("p cnf ")));
}

#[test]
fn scope_override_too_small() {
    let out = cdod(&["check", path(&fixture("cd2.cd")), path(&fixture("od2.od")), "elicit", "--scope", "Emp=0,Mgr=0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = cdod(&["check", path(&fixture("cd2.cd")), path(&fixture("od2.od")), "elicit", "--scope", "Emp=x"]);
    assert_eq!(out.status.code(), Some(3));
}
