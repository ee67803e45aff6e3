use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_metric-affine"));
    c.env_remove("METRIC_AFFINE_BUDGET");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lift_then_drop_restores_the_file() {
    let dir = tempfile::tempdir().unwrap();
    for record in [
        r#"{"field":"GF(3)","dim":1,"upper":[1]}"#,
        r#"{"field":"GF(5)","dim":2,"upper":[1,0,3]}"#,
        r#"{"field":"GF(2)","dim":2,"upper":[1,1,1]}"#,
        r#"{"field":"Q","dim":2,"upper":["1/2",3,-5]}"#,
    ] {
        let a = write(dir.path(), "a.json", &format!("{record}\n"));
        let b = dir.path().join("b.json");
        let c = dir.path().join("c.json");
        let o = run(&["lift", &a, "-o", b.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let o = run(&["drop", b.to_str().unwrap(), "-o", c.to_str().unwrap()]);
        assert!(o.status.success());
        assert_eq!(fs::read_to_string(&c).unwrap(), fs::read_to_string(&a).unwrap());
    }
}

#[test]
fn lift_prints_polynomial_and_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"field":"GF(3)","dim":1,"upper":[1]}"#);
    let o = run(&["lift", &a]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "lift: a1^2\n{\"field\":\"GF(3)\",\"dim\":2,\"upper\":[0,0,1]}\n[0 0]\n[0 1]\n");
}

#[test]
fn degenerate_lift_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"field":"GF(3)","dim":2,"upper":[1,0,0]}"#);
    let o = run(&["lift", &a]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0,1)"));
}

#[test]
fn undroppable_form_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"field":"GF(3)","dim":2,"upper":[1,0,1]}"#);
    assert_eq!(run(&["drop", &a]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "tables", "--case", "t4"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "tables", "--case", "t9"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "tables", "--case", "t2", "--field", "GF(5)"]).status.code(), Some(2));
    assert_eq!(
        run(&["--budget", "10", "verify", "proposition", "--field", "GF(3)", "--dim", "2"]).status.code(),
        Some(3)
    );
    let o = bin()
        .env("METRIC_AFFINE_BUDGET", "100000000")
        .args(["verify", "lemmas", "--field", "GF(2)", "--dim", "1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = bin()
        .env("METRIC_AFFINE_BUDGET", "lots")
        .args(["verify", "lemmas", "--field", "2", "--dim", "1"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(run(&["lift", "/nonexistent/form.json"]).status.code(), Some(2));
}

#[test]
fn table_output_is_deterministic() {
    let a = run(&["verify", "tables"]);
    let b = run(&["verify", "tables"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("| x1^2 + x1*x2        | a1*a2 + a2^2         |"));
    assert!(text.contains("(t+1)*a0^2"));
}

#[test]
fn records_are_json_lines() {
    let o = run(&["--format", "records", "verify", "theorem", "--field", "GF(5)", "--dim", "1"]);
    assert_eq!(o.status.code(), Some(0));
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["kind"], "report");
        assert_eq!(v["report"]["failures"].as_array().unwrap().len(), 0);
    }
}

#[test]
fn eval_and_groups() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"field":"GF(4)","dim":2,"upper":["t",1,0]}"#);
    let o = run(&["eval", &a, "(t,1)"]);
    assert_eq!(stdout(&o), "t+1\n");
    assert_eq!(run(&["eval", &a, "1,2,3"]).status.code(), Some(2));

    let b = write(dir.path(), "b.json", r#"{"field":"GF(2)","dim":3,"upper":[0,1,0,0,0,0]}"#);
    let o = run(&["--format", "records", "groups", &b]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["reflections"]["generates"], false);
    assert_eq!(v["reflections"]["shape"], "hyperbolic_plane");
}

#[test]
fn quadric_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = write(dir.path(), "a.json", r#"{"field":"GF(5)","dim":3,"upper":[0,1,0,0,0,1]}"#);
    let o = run(&["-v", "verify", "quadric", &a]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}
