use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stirlingkit"));
    cmd.env_remove("STIRLINGKIT_MAX_N");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

#[test]
fn bell_json() {
    let out = run(&["seq", "bell", "--n", "8", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"["1","1","2","5","15","52","203","877","4140"]"#);
}

#[test]
fn seq_formats() {
    let out = run(&["seq", "harmonic", "--n", "3", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,value\n0,0\n1,1\n2,3/2\n3,11/6\n");
    let out = run(&["seq", "power-sum", "--n", "2", "--p", "2", "--format", "csv"]);
    assert_eq!(stdout(&out), "n,p,value\n0,2,0\n1,2,1\n2,2,5\n");
    let out = run(&["seq", "fubini", "--n", "4", "--format", "text"]);
    let text = stdout(&out);
    assert!(text.lines().last().unwrap().ends_with("75"), "{text}");
}

#[test]
fn triangle_json_rows() {
    let out = run(&["triangle", "stirling1", "--n", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[8], serde_json::json!({"n": 3, "k": 2, "value": "-3"}));
}

#[test]
fn poly_text_and_value() {
    let out = run(&["poly", "exp", "--n", "3", "--format", "text"]);
    assert_eq!(stdout(&out).trim(), "x + 3*x^2 + x^3");
    let out = run(&["poly", "geom", "--n", "2", "--at", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["value"], "3");
}

#[test]
fn series_substitution() {
    // exp composed with e^t - 1 gives the Bell numbers
    let out = run(&["series", "exp", "--order", "5", "--substitute", "exp"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["egf"], serde_json::json!(["1", "1", "2", "5", "15", "52"]));
    let out = run(&["series", "pow1p", "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_round_trip_through_stdin() {
    let out = with_stdin(&["transform", "--kind", "stirling"], r#"["1","1","1","1","1"]"#);
    let bell = stdout(&out);
    assert_eq!(bell.trim(), r#"["1","1","2","5","15"]"#);
    let back = with_stdin(&["transform", "--kind", "inv-stirling"], &bell);
    assert_eq!(stdout(&back).trim(), r#"["1","1","1","1","1"]"#);
    let bad = with_stdin(&["transform", "--kind", "binomial"], r#"["1","x"]"#);
    assert_eq!(bad.status.code(), Some(2));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn eval_prints_json_string() {
    let out = run(&["eval", "sum(k=0..n, S(n,k)*(-1)^k*fact(k)*H(k))", "--var", "n=3"]);
    assert_eq!(stdout(&out).trim(), r#""-3""#);
    let out = run(&["eval", "1 + * 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column 5"));
    let out = run(&["eval", "1/0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_one_identity_json() {
    let out = run(&["verify", "--id", "T1b", "--max-n", "10", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["id"], "T1b");
    assert_eq!(v["checked"], 11);
    assert!(stdout(&out).contains(r#""failures": []"#));
}

#[test]
fn verify_all_covers_registry() {
    let out = run(&["verify", "--all", "--max-n", "8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["id"].as_str().unwrap()).collect();
    let expected: Vec<&str> = stirlingkit::identities::list_identities().iter().map(|s| s.id).collect();
    assert_eq!(ids, expected);
}

#[test]
fn verify_is_deterministic() {
    let a = run(&["verify", "--all", "--max-n", "6", "--format", "json"]);
    let b = run(&["verify", "--all", "--max-n", "6", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn environment_sets_default_max_n() {
    let out = bin()
        .args(["verify", "--id", "T6a", "--format", "json"])
        .env("STIRLINGKIT_MAX_N", "7")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["checked"], 7);
    // capped identities keep their cap
    let out = bin()
        .args(["verify", "--id", "T3a", "--format", "json"])
        .env("STIRLINGKIT_MAX_N", "100")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["checked"], 16);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["verify", "--all", "--order", "65"],
        vec!["verify", "--all", "--max-n", "4"],
        vec!["verify"],
        vec!["verify", "--id", "NOPE"],
        vec!["seq", "catalan", "--n", "3"],
        vec!["triangle", "lah", "--n", "3"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn verify_list() {
    let out = run(&["verify", "--all", "--list"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("ROUTES"));
}
