use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spectra-trace")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .env("SPECTRA_TRACE_THREADS", "1")
        .output()
        .unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn eigs_on_zero_potential() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "zero.json",
        r#"{"kind": "box", "height": [0, 0], "support": [0, 1]}"#,
    );
    let o = run(&["eigs", "--potential", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["eigenvalues"]["eigenvalues"].as_array().unwrap().len(), 0);
}

#[test]
fn trace_on_small_box() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "b.json",
        r#"{"kind": "box", "height": [0.1, 0], "support": [0, 1]}"#,
    );
    let o = run(&["trace", "--potential", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["K0_inferred"].as_f64().unwrap().abs() <= 1e-6);
}

#[test]
fn certify_deep_well() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "w.json",
        r#"{"kind": "box", "height": [-9, 0], "support": [0, 1]}"#,
    );
    let rho = format!("{}", 9.0 * std::f64::consts::SQRT_2);
    let o = run(&["certify", "--potential", p.to_str().unwrap(), "--rho", &rho]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["observed_count"].as_f64().unwrap() <= v["bound"].as_f64().unwrap());
    assert_eq!(v["total_count"].as_u64(), Some(1));
}

#[test]
fn reports_are_deterministic_and_reparse() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "c.json",
        r#"{"kind": "box", "height": [-6, 3], "support": [-0.5, 0.7]}"#,
    );
    let p = p.to_str().unwrap();
    for cmd in ["norms", "eigs", "jost"] {
        let a = run(&[cmd, "--potential", p]);
        let b = run(&[cmd, "--potential", p]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{cmd} differs between runs");
        json(&a);
    }
    let out = d.path().join("e.csv");
    let o = run(&[
        "eigs",
        "--potential",
        p,
        "--format",
        "csv",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut r = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(r.headers().unwrap(), vec!["quantity", "re", "im", "err"]);
    assert!(r.records().all(|x| x.is_ok()));
}

#[test]
fn reals_carry_seventeen_digits() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "pp.json",
        r#"{"kind": "paper_power", "amplitude": [0.5, 0.8660254037844386], "t": 0.1}"#,
    );
    let o = run(&["norms", "--potential", p.to_str().unwrap()]);
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains("\"l1_norm\": 1.0000000000000000e1"), "{s}");
}

#[test]
fn jost_grid() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "b.json",
        r#"{"kind": "box", "height": [0, 2], "support": [0, 1]}"#,
    );
    let o = run(&["jost", "--potential", p.to_str().unwrap(), "--grid", "-1,1,0.5,1.5,3,2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["points"].as_array().unwrap().len(), 6);
}

#[test]
fn validation_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let good = write(
        d.path(),
        "b.json",
        r#"{"kind": "box", "height": [1, 0], "support": [0, 1]}"#,
    );
    let bad = write(
        d.path(),
        "bad.json",
        r#"{"kind": "box", "height": [1, 0], "support": [1, 0]}"#,
    );
    let left = write(
        d.path(),
        "l.json",
        r#"{"kind": "box", "height": [1, 0], "support": [-1, 1]}"#,
    );
    let good = good.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["eigs", "--potential", bad.to_str().unwrap()],
        vec!["eigs", "--potential", "/nonexistent/q.json"],
        vec!["eigs", "--potential", good, "--grid", "0,1,0,1,2,2"],
        vec!["jost", "--potential", good, "--grid", "0,1,0,1,0,2"],
        vec!["trace", "--potential", good, "--tol-quad", "-1"],
        vec!["certify", "--potential", good, "--rho", "0.1"],
        vec!["halfline", "--potential", left.to_str().unwrap()],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.starts_with("ERROR: ") || err.contains("error:"), "{args:?}: {err}");
    }
}

#[test]
fn unreachable_tolerance_exits_3() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "b.json",
        r#"{"kind": "grid", "xs": [0, 0.5, 1], "qs": [[0, 0], [3, 1], [0, 0]]}"#,
    );
    let o = run(&["jost", "--potential", p.to_str().unwrap(), "--tol-w", "1e-300"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("ERROR: "));
}

#[test]
fn thread_cap_is_validated() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "b.json",
        r#"{"kind": "box", "height": [1, 0], "support": [0, 1]}"#,
    );
    let o = Command::new(bin())
        .args(["norms", "--potential", p.to_str().unwrap()])
        .env("SPECTRA_TRACE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn halfline_on_deep_well() {
    let d = tempfile::tempdir().unwrap();
    let p = write(
        d.path(),
        "w.json",
        r#"{"kind": "box", "height": [-9, 0], "support": [0, 1]}"#,
    );
    let o = run(&["halfline", "--potential", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["factorization_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["even_extension_count"].as_u64(), Some(2));
}
