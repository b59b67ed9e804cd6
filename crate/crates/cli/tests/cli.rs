use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_critfan"))
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("critfan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn so8_mult(n: u64) -> String {
    format!(r#"{{"group":[{{"family":"so_even","rank":4}}],"representation":{{"kind":"mult","of":{{"kind":"std"}},"times":{n}}}}}"#)
}

#[test]
fn analyze_exit_codes() {
    let p7 = scratch("kr7.json", &so8_mult(7));
    let out = run(&["analyze", p7.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criticality"]["global_verdict"], "NonCritical");
    assert_eq!(v["fan"]["rays"].as_array().unwrap().len(), 5);

    let p4 = scratch("kr4.json", &so8_mult(4));
    let out = run(&["analyze", p4.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criticality"]["witnesses"], serde_json::json!([[-1, -1, -1, 0]]));

    let r0 = scratch("rank0.json", r#"{"group":[{"family":"so_even","rank":0}],"representation":{"kind":"std"}}"#);
    let out = run(&["analyze", r0.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("group[0].rank"));

    let central = scratch("central.json", r#"{"group":[{"family":"gl","rank":2}],"representation":{"kind":"adjoint"}}"#);
    assert_eq!(run(&["analyze", central.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn unknown_keys_rejected_without_output() {
    let p = scratch("bad.json", r#"{"group":[{"family":"torus","rank":1}],"representation":{"kind":"std","colour":1}}"#);
    let out = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn reports_are_byte_identical() {
    let p = scratch("kr5.json", &so8_mult(5));
    let a = run(&["analyze", p.to_str().unwrap(), "--seedless"]);
    let b = run(&["analyze", p.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["provenance"]["input_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn toml_spec_and_out_path() {
    let p = scratch(
        "der.toml",
        "group = [{family = \"so_even\", rank = 4}]\nshift = \"none\"\n[representation]\nkind = \"mult\"\ntimes = 7\nof = {kind = \"std\"}\n[options]\nderivative_of = [[-1, 0, 0, 0]]\n",
    );
    let out_path = p.with_extension("report.json");
    let out = run(&["derivative", p.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["derivative"]["fan"]["maximal"].as_array().unwrap().len(), 2);
}

#[test]
fn haar_shift_flag_moves_tate_witness() {
    let p = scratch("tate.json", r#"{"group":[{"family":"torus","rank":1}],"representation":{"kind":"std"}}"#);
    let out = run(&["analyze", p.to_str().unwrap(), "--shift", "haar"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criticality"]["witnesses"], serde_json::json!([[1]]));
}

#[test]
fn simulate_gl1() {
    let p = scratch("gl1.json", r#"{"group":[{"family":"gl","rank":1}],"representation":{"kind":"std"}}"#);
    let out = run(&["simulate", p.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let slopes = v["numeric"]["slopes"].as_array().unwrap();
    let pos = slopes.iter().find(|s| s["direction"] == serde_json::json!([1])).unwrap();
    assert!((pos["slope"].as_f64().unwrap() + 1.0).abs() < 0.05);
    assert_eq!(pos["prediction"], "-1");
    assert!(v["numeric"]["poisson_residual"].as_f64().unwrap() < 1e-10);

    let big = scratch("big.json", r#"{"group":[{"family":"gl","rank":3}],"representation":{"kind":"mult","of":{"kind":"std"},"times":3}}"#);
    let out = run(&["simulate", big.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported for simulation"));
}

#[test]
fn regularize_outputs() {
    let out = run(&["regularize", "t_exp"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("1.000000000\n"));
    let out = run(&["regularize", "bessel"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("0.227787745\n"));
    assert_eq!(run(&["regularize", "exp"]).status.code(), Some(3));
    assert_eq!(run(&["regularize", "cosh"]).status.code(), Some(1));
}

#[test]
fn selftest_filter_and_injection() {
    let out = run(&["selftest", "--filter", "kudla"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).all(|l| l.contains("kudla_rallis")));
    let out = run(&["selftest", "--filter", "kudla", "--inject", "wrong-two-rho"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kudla_rallis"));
}
