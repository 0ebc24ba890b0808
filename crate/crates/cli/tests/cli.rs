use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bclique(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bclique"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn generated(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    let out = bclique(&full);
    assert!(out.status.success());
    write(dir, name, &stdout(&out))
}

struct Fixture {
    _dir: TempDir,
    triangle: String,
    ab: String,
    c5: String,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let triangle = write(dir.path(), "k3", "a b\nb c\na c\n");
    let ab = write(dir.path(), "b", "a b\n");
    let c5 = generated(dir.path(), "c5", &["--family", "cycle", "--n", "5"]);
    Fixture {
        triangle: triangle.to_str().unwrap().into(),
        ab: ab.to_str().unwrap().into(),
        c5: c5.to_str().unwrap().into(),
        _dir: dir,
    }
}

#[test]
fn poly_triangle_all_methods() {
    let f = fixture();
    for m in ["direct", "vertex", "edge"] {
        let out = bclique(&["poly", "--graph", &f.triangle, "--b", &f.ab, "--method", m]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout(&out), "1 + 2*x + x^2\n");
    }
}

#[test]
fn poly_empty_b_and_unit_weights() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty", "# nothing\n");
    let out = bclique(&["poly", "--graph", &f.triangle, "--b", empty.to_str().unwrap()]);
    assert_eq!(stdout(&out), "1\n");
    let w = write(dir.path(), "w", "a 1\nb 1\n");
    let out = bclique(&[
        "poly",
        "--graph",
        &f.triangle,
        "--b",
        &f.ab,
        "--weights",
        w.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "1 + 2*x + x^2\n");
    let w2 = write(dir.path(), "w2", "a 2\nb 3\n");
    let out = bclique(&[
        "poly",
        "--graph",
        &f.triangle,
        "--b",
        &f.ab,
        "--weights",
        w2.to_str().unwrap(),
    ]);
    assert_eq!(stdout(&out), "1 + 5*x + 6*x^2\n");
}

#[test]
fn parse_errors_exit_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad", "a b\na b c\n");
    let out = bclique(&["poly", "--graph", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = bclique(&["poly", "--graph", "/nonexistent/graph"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zeta_outputs() {
    let f = fixture();
    let dir = tempfile::tempdir().unwrap();
    let k4 = generated(dir.path(), "k4", &["--family", "complete", "--n", "4"]);
    let out = bclique(&["--format", "json", "zeta", "--graph", k4.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["zeta"]["kind"], "exact");
    assert_eq!(v["zeta"]["exact"], "-1");
    let out = bclique(&["--format", "json", "zeta", "--graph", &f.c5]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["zeta"]["kind"], "bracket");
    assert!((v["zeta"]["float"].as_f64().unwrap() + 0.2763932).abs() < 1e-7);
    let empty = write(dir.path(), "empty", "");
    let out = bclique(&[
        "--format",
        "json",
        "zeta",
        "--graph",
        &f.c5,
        "--b",
        empty.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["zeta"]["kind"], "no_negative_root");
}

#[test]
fn precision_range_enforced() {
    let f = fixture();
    assert_eq!(
        bclique(&["zeta", "--graph", &f.c5, "--precision", "19"]).status.code(),
        Some(2)
    );
    assert_eq!(
        bclique(&["zeta", "--graph", &f.c5, "--precision", "200"]).status.code(),
        Some(0)
    );
}

#[test]
fn spectral_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let p = generated(dir.path(), "p", &["--family", "petersen"]);
    let out = bclique(&["--format", "json", "spectral", "--graph", p.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    let star = generated(dir.path(), "s", &["--family", "star", "--n", "3"]);
    let out = bclique(&["spectral", "--graph", star.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("regular"));
    assert_eq!(
        bclique(&["bounds", "--graph", star.to_str().unwrap()]).status.code(),
        Some(3)
    );
    let k8 = generated(dir.path(), "k8", &["--family", "complete", "--n", "8"]);
    let out = bclique(&["--format", "json", "bounds", "--graph", k8.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["all_satisfied"], true);
}

#[test]
fn hom_fixtures() {
    let f = fixture();
    let out = bclique(&["--format", "json", "hom", "--graph", &f.triangle, "--graph2", &f.c5]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["criterion"]["verdict"], "no_hom_certified");
    assert_eq!(v["search"]["outcome"], "none");
    let out = bclique(&["--format", "json", "hom", "--graph", &f.c5, "--graph2", &f.triangle]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["criterion"]["verdict"], "inconclusive");
    assert_eq!(v["search"]["outcome"], "found");
    let out = bclique(&["hom", "--graph", &f.c5, "--graph2", &f.triangle, "--cap-nodes", "0"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn selftest_flags() {
    let out = bclique(&["selftest", "--scale", "paper-examples"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("worked-example"));
    assert_eq!(bclique(&["selftest", "--scale", "huge"]).status.code(), Some(2));
    assert_eq!(bclique(&["selftest", "--bogus"]).status.code(), Some(2));
}

#[test]
fn selftest_json_is_byte_identical() {
    let a = bclique(&["--format", "json", "selftest", "--scale", "small", "--seed", "11"]);
    let b = bclique(&["--format", "json", "selftest", "--scale", "small", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
