use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wellbalanced"));
    c.env_remove("WELLBALANCED_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const SQUARE: &str = r#"{
  "version": 1,
  "vertices": ["a", "b", "c", "d", "p", "q"],
  "edges": [["a", "b", 2], ["b", "c", 2], ["c", "d", 2], ["a", "d", 2], ["p", "a", 1], ["q", "c", 1]]
}"#;

fn pairing(pairs: &[(&str, &str)]) -> String {
    let recs: Vec<String> = pairs.iter().map(|(a, b)| format!("[\"{a}\", \"{b}\", 1]")).collect();
    format!(
        "{{\"version\": 1, \"vertices\": [\"a\", \"b\", \"c\", \"d\", \"p\", \"q\"], \"pairing\": [{}]}}",
        recs.join(", ")
    )
}

#[test]
fn decide_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", SQUARE);
    let good = write(dir.path(), "good.json", &pairing(&[("a", "p"), ("c", "q")]));
    let bad = write(dir.path(), "bad.json", &pairing(&[("a", "c"), ("p", "q")]));
    let s = |p: &PathBuf| p.to_str().unwrap().to_owned();

    let o = run(&["decide", "ca", &s(&g), &s(&good)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("cut-admissible"));
    let o = run(&["decide", "ca", &s(&g), &s(&bad)]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("{a,b,d,p}"), "{}", stdout(&o));
    assert_eq!(code(&run(&["decide", "oa", &s(&g), &s(&good)])), 0);
    assert_eq!(code(&run(&["decide", "oa", &s(&g), &s(&bad)])), 1);

    let o = run(&["--json", "check", "ca-cert", &s(&g), &s(&bad), "--set", "a,b,p"]);
    assert_eq!(code(&o), 1);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["cut_g"].as_u64(), v["cut_f"].as_u64(), v["r"].as_u64()), (Some(4), Some(2), Some(4)));

    let o = run(&["attack", &s(&g), &s(&bad), "--set", "a,b,p", "--out", dir.path().join("o.json").to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("lambda(a, c)"), "{}", stdout(&o));
    assert_eq!(code(&run(&["attack", &s(&g), &s(&good), "--set", "a,b,p"])), 2);
}

#[test]
fn queries() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.json", SQUARE);
    let g = g.to_str().unwrap();
    let o = run(&["lambda", g, "a", "c"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("lambda(a, c) = 4"));
    let o = run(&["--json", "rvalue", g, "--set", "a,b,p"]);
    assert_eq!(stdout(&o).trim(), r#"{"r":4}"#);
    assert_eq!(code(&run(&["lambda", g, "a", "zz"])), 2);
}

#[test]
fn malformed_input_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let neg = write(dir.path(), "neg.json", r#"{"version": 1, "vertices": ["a", "b"], "edges": [["a", "b", -2]]}"#);
    let o = run(&["lambda", neg.to_str().unwrap(), "a", "b"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn grid_with_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.json");
    let o = run(&["gen", "grid", "--alpha", "3", "--beta", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let ports: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("w.json.ports.json")).unwrap()).unwrap();
    assert_eq!(ports["L"], serde_json::json!(["r3c1", "r6c1"]));
    assert_eq!(ports["P"], serde_json::json!(["r3c2", "r6c2"]));
    assert_eq!(code(&run(&["gen", "grid", "--alpha", "4", "--beta", "2"])), 2);
}

#[test]
fn reduction_pipeline_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    write(dir.path(), "h.json", r#"{"version": 1, "vertices": ["a", "b"], "edges": [["a", "b", 6]], "threshold": 4}"#);
    assert_eq!(code(&run(&["reduce", "amaxcut-to-g1", &p("h.json"), "--out", &p("g1.json")])), 0);
    let o = run(&["reduce", "amaxcut-to-ca", &p("h.json"), "--out", &p("ca.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("3362 vertices"));
    let o = run(&["--json", "lift", "cut", &p("ca.json"), "--set", "s,a", "--out", &p("lifted.json")]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["value"].as_i64(), v["violates"].as_bool()), (Some(6), Some(true)));
    // the pairing travels inside the instance document
    let o = run(&["check", "ca-cert", &p("ca.json"), &p("ca.json"), "--set", "q"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn maxcut_doubling() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    write(
        dir.path(),
        "tri.json",
        r#"{"version": 1, "vertices": ["a", "b", "c"], "edges": [["a", "b", 1], ["b", "c", 1], ["a", "c", 1]]}"#,
    );
    assert_eq!(code(&run(&["reduce", "maxcut-to-amaxcut", &p("tri.json"), "--k", "1", "--out", &p("am.json")])), 0);
    let text = std::fs::read_to_string(p("am.json")).unwrap();
    assert!(text.contains("[\"a\", \"b\", 2]") && text.contains("\"threshold\": 2"));
    let o = run(&["--json", "solve", "maxcut", "--brute", &p("am.json"), "--out", &p("cut.json")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"value\":4"));
}

#[test]
fn bwbo_to_laco_and_back() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    write(
        dir.path(),
        "b.json",
        r#"{"version": 1, "vertices": ["u", "v"], "edges": [["u", "v", 1]], "bounds": [["u", 1, 0], ["v", 0, 0]]}"#,
    );
    assert_eq!(code(&run(&["reduce", "bwbo-to-laco", &p("b.json"), "--out", &p("l.json")])), 0);
    assert_eq!(code(&run(&["solve", "laco", "--brute", &p("l.json"), "--out", &p("dl.json")])), 0);
    assert_eq!(code(&run(&["project", "laco-witness", &p("l.json"), &p("dl.json"), "--out", &p("d.json")])), 0);
    assert!(std::fs::read_to_string(p("d.json")).unwrap().contains("[\"u\", \"v\", 1]"));
    assert_eq!(code(&run(&["solve", "bwbo", "--brute", &p("b.json"), "--out", &p("db.json")])), 0);
    assert_eq!(
        code(&run(&["lift", "bwbo-witness", &p("b.json"), &p("l.json"), &p("db.json"), "--out", &p("up.json")])),
        0
    );
    write(
        dir.path(),
        "no.json",
        r#"{"version": 1, "vertices": ["u", "v"], "edges": [["u", "v", 1]], "bounds": [["u", 1, 0], ["v", 1, 0]]}"#,
    );
    assert_eq!(code(&run(&["solve", "bwbo", "--brute", &p("no.json")])), 1);
    assert_ne!(code(&run(&["solve", "bwbo", &p("no.json")])), 0);
}

#[test]
fn extend_eulerian_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_owned();
    write(
        dir.path(),
        "g.json",
        r#"{"version": 1, "vertices": ["a", "b", "c", "d"], "edges": [["a", "b", 1], ["c", "d", 1]]}"#,
    );
    write(
        dir.path(),
        "f.json",
        r#"{"version": 1, "vertices": ["a", "b", "c", "d"], "arcs": [["a", "c", 1], ["b", "d", 1]]}"#,
    );
    let o = run(&["--json", "extend-eulerian", &p("g.json"), &p("f.json"), "--out", &p("x.json")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains(r#""set":["a","b"]"#), "{}", stdout(&o));
    write(
        dir.path(),
        "f2.json",
        r#"{"version": 1, "vertices": ["a", "b", "c", "d"], "arcs": [["c", "a", 1], ["b", "d", 1]]}"#,
    );
    assert_eq!(code(&run(&["extend-eulerian", &p("g.json"), &p("f2.json"), "--out", &p("y.json")])), 0);
}

#[test]
fn find_and_solve_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(
        dir.path(),
        "path.json",
        r#"{"version": 1, "vertices": ["a", "b", "c"], "edges": [["a", "b", 1], ["b", "c", 1]]}"#,
    );
    let o = run(&["find", "ca-pairing", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"pairing\": [\n    [\"a\", \"c\", 1]"), "{}", stdout(&o));
    let o = run(&["solve", "wbo", "--brute", g.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"arcs\""));
}

#[test]
fn config_limits_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "limits.toml", "ca_max_vertices = 3\n");
    let g = write(dir.path(), "g.json", SQUARE);
    let f = write(dir.path(), "f.json", &pairing(&[("a", "p"), ("c", "q")]));
    let args = ["--config", cfg.to_str().unwrap(), "decide", "ca", g.to_str().unwrap(), f.to_str().unwrap()];
    let o = run(&args);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("ca_max_vertices") || String::from_utf8_lossy(&o.stderr).contains("limit 3"));
    let bad = write(dir.path(), "bad.toml", "no_such_limit = 1\n");
    assert_eq!(code(&run(&["--config", bad.to_str().unwrap(), "rvalue", g.to_str().unwrap(), "--set", "a"])), 2);
}

#[test]
fn suite_exit_codes_and_determinism() {
    let o = run(&["suite", "--quick", "--only", "5,7"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("summary: 2/2 passed"));
    let a = run(&["--json", "--threads", "1", "suite", "--quick", "--only", "1,6,12", "--seed", "3"]);
    let b = run(&["--json", "--threads", "4", "suite", "--quick", "--only", "1,6,12", "--seed", "3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);

    let o = run(&["suite", "--only", "6", "--mutate-grid-padding"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("degree profile false"));

    let empty = tempfile::tempdir().unwrap();
    let o = run(&["suite", "--fixtures", empty.path().to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("corpus.txt"));
}
