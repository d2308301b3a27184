//! Command line contract: output goldens, exit codes, record mirroring,
//! and file loading, all through the installed binary.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adem-cartan"))
}

fn model_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

#[test]
fn expansion_goldens() {
    let out = run(&["expand", "dg", "--m", "1", "--n", "1"]);
    assert_eq!(stdout_line(&out), "expand: e_0(e_0,e_0).(1234) + e_0(e_0,e_0).(3214)");
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["expand", "alpha", "--n", "0", "--p", "0"]);
    assert_eq!(stdout_line(&out), "expand: e_0(e_0,e_0).(1234)");

    // Out of range on the zero side renders the zero sum rather than erroring.
    let out = run(&["expand", "u", "--m", "2", "--n", "1", "--x", "0"]);
    assert_eq!(stdout_line(&out), "expand: 0");
}

#[test]
fn adem_goldens() {
    assert_eq!(stdout_line(&run(&["adem", "reduce", "Sq^2 Sq^2"])), "normal form: Sq^3 Sq^1");
    assert_eq!(stdout_line(&run(&["adem", "reduce", "Sq^1 Sq^1"])), "normal form: 0");
    let out = run(&["adem", "reduce", "Sq^0 Sq^2", "--mode", "a2"]);
    assert_eq!(stdout_line(&out), "normal form: Sq^2");
}

#[test]
fn usage_errors_exit_2() {
    // Parse error, with a position in the message.
    let out = run(&["adem", "reduce", "Sq^ two"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("at byte"));

    // Range violations.
    assert_eq!(run(&["expand", "dg", "--m", "2", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "u", "--m", "0", "--n", "1", "--x", "0"]).status.code(), Some(2));

    // Missing file.
    let out = run(&["sq", "--complex", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));

    // Negative exponents are rejected by the quotient algebra.
    assert_eq!(run(&["adem", "reduce", "Sq^-1 Sq^3", "--mode", "a2"]).status.code(), Some(2));
}

#[test]
fn records_mirror_text() {
    let text = run(&["verify", "d2", "--max-n", "4"]);
    let records = run(&["verify", "d2", "--max-n", "4", "--format", "records"]);
    let text_lines: Vec<String> =
        String::from_utf8_lossy(&text.stdout).lines().map(String::from).collect();
    let record_lines: Vec<String> =
        String::from_utf8_lossy(&records.stdout).lines().map(String::from).collect();
    assert_eq!(text_lines.len(), record_lines.len());
    for (t, r) in text_lines.iter().zip(&record_lines) {
        let v: serde_json::Value = serde_json::from_str(r).expect("valid json per line");
        let label = v["label"].as_str().unwrap();
        assert!(t.contains(label), "{} missing from {}", label, t);
    }
}

#[test]
fn seed_changes_the_samples_but_not_the_shape() {
    let a = run(&["verify", "lemma51", "--max-p", "2", "--samples", "50", "--seed", "1"]);
    let b = run(&["verify", "lemma51", "--max-p", "2", "--samples", "50", "--seed", "1"]);
    assert_eq!(a.stdout, b.stdout, "fixed seed must give byte-identical output");
    assert_eq!(a.status.code(), Some(0));
}

#[test]
fn loads_every_bundled_model() {
    for name in ["s1.json", "s2.json", "rp2.json", "torus.json", "point.json"] {
        let path = model_path(name);
        let out = run(&["verify", "relations", "--complex", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{} fails: {}", name, stdout_line(&out));
    }
}

#[test]
fn sq_table_marks_instability() {
    let path = model_path("rp2.json");
    let out = run(&["sq", "--complex", path.to_str().unwrap()]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("[instability]"));
    // The 1-class squares to the 2-class under Sq^1.
    assert!(text.lines().any(|l| l.starts_with("Sq^1(") && l.contains(": [0,1,2]")), "{}", text);
}

#[test]
fn solve_reports_the_obstruction() {
    let path = model_path("torus.json");
    let out = run(&[
        "solve",
        "--complex",
        path.to_str().unwrap(),
        "--max-n",
        "3",
        "--check-functional",
        "torus-diagonal",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_line(&out));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("constant 1"), "{}", text);
}

#[test]
fn secondary_on_the_torus() {
    let path = model_path("torus.json");
    let out = run(&[
        "secondary",
        "--complex",
        path.to_str().unwrap(),
        "--cocycle",
        "a(x)1",
        "--relation",
        "Sq^1 Sq^1",
        "--target",
        "1,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("value degree: 2"), "{}", text);
    assert!(text.contains("quotient dimension: 1"), "{}", text);
}

#[test]
fn rejects_malformed_files() {
    let dir = tempfile::tempdir().expect("tempdir");

    let bad_json = dir.path().join("bad.json");
    std::fs::File::create(&bad_json)
        .and_then(|mut f| f.write_all(b"{ not json"))
        .expect("write");
    assert_eq!(
        run(&["sq", "--complex", bad_json.to_str().unwrap()]).status.code(),
        Some(2)
    );

    // Degree mismatch in an e-entry.
    let bad_degree = dir.path().join("bad_degree.json");
    std::fs::write(
        &bad_degree,
        r#"{"type":"cup_algebra",
            "basis":[{"name":"1","degree":0},{"name":"a","degree":1}],
            "d":[],
            "e":[{"i":0,"args":["a","a"],"value":["a"]}]}"#,
    )
    .expect("write");
    let out = run(&["sq", "--complex", bad_degree.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("degree"));

    // A tensor file may point at its own directory.
    let inner = dir.path().join("c.json");
    std::fs::write(
        &inner,
        r#"{"type":"cup_algebra",
            "basis":[{"name":"1","degree":0},{"name":"a","degree":1}],
            "d":[],
            "e":[{"i":0,"args":["1","1"],"value":["1"]},
                 {"i":0,"args":["1","a"],"value":["a"]},
                 {"i":0,"args":["a","1"],"value":["a"]},
                 {"i":1,"args":["a","a"],"value":["a"]}]}"#,
    )
    .expect("write");
    let pair = dir.path().join("pair.json");
    std::fs::write(&pair, r#"{"type":"tensor","factors":["c.json","c.json"]}"#).expect("write");
    let out = run(&["verify", "relations", "--complex", pair.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_line(&out));

    // Self-reference must be cut off, not loop.
    let cyc = dir.path().join("cyc.json");
    std::fs::write(&cyc, r#"{"type":"tensor","factors":["cyc.json","cyc.json"]}"#)
        .expect("write");
    assert_eq!(
        run(&["sq", "--complex", cyc.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_identities_fast_bounds() {
    let out = run(&["verify", "identities", "--max-m", "3", "--max-n", "4", "--max-x", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().last().unwrap().starts_with("summary:"));
    assert!(text.contains("identities/dalpha n=4"));
}
