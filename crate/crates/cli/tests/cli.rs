use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clcst::{io, Algebra, Domain, GridSignal, GridSpec};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_clcst"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    let out = bin().current_dir(dir).args(args).output().expect("spawn clcst");
    assert!(
        out.status.success(),
        "clcst {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn small_grid(dir: &Path, name: &str) -> PathBuf {
    run(dir, &["synthesize", "--kind", "gaussian-mixture", "--L", "6", "--N", "16", "-o", name]);
    dir.join(name)
}

#[test]
fn example1_signal_is_one_at_origin() {
    let d = tempfile::tempdir().unwrap();
    run(d.path(), &["synthesize", "--kind", "example1", "-o", "f.clcg"]);
    let f = io::read_signal(&d.path().join("f.clcg")).unwrap();
    assert_eq!(f.spec(), &GridSpec::new(2, 6.0, 64).unwrap());
    assert_eq!(f.plane(0)[32 * 64 + 32], 1.0);
    assert!((f.plane(0)[33 * 64 + 32] - (-(6.0f64 / 32.0).powi(2)).exp()).abs() < 1e-16);
}

#[test]
fn grid_and_volume_files_round_trip_bit_exact() {
    let d = tempfile::tempdir().unwrap();
    let f = small_grid(d.path(), "f.clcg");
    let sig = io::read_signal(&f).unwrap();
    assert_eq!(io::encode_signal(&sig).unwrap(), fs::read(&f).unwrap());

    run(d.path(), &["transform", "-i", "f.clcg", "-o", "v.clcg", "--u-count", "2", "--report", "r.json"]);
    let v = d.path().join("v.clcg");
    let vol = io::read_volume(&v).unwrap();
    assert_eq!(io::encode_volume(&vol).unwrap(), fs::read(&v).unwrap());
    io::write_volume(&d.path().join("v2.clcg"), &vol).unwrap();
    assert_eq!(fs::read(&v).unwrap(), fs::read(d.path().join("v2.clcg")).unwrap());
    assert_eq!(
        fs::read(io::sidecar_path(&v)).unwrap(),
        fs::read(io::sidecar_path(&d.path().join("v2.clcg"))).unwrap()
    );
}

#[test]
fn zero_input_is_flagged() {
    let d = tempfile::tempdir().unwrap();
    let alg = Algebra::for_transforms(2).unwrap();
    let z = GridSignal::zeros(GridSpec::new(2, 6.0, 16).unwrap(), Domain::Spatial, &alg).unwrap();
    io::write_signal(&d.path().join("z.clcg"), &z).unwrap();
    let out = run(d.path(), &["transform", "-i", "z.clcg", "-o", "v.clcg", "--u-count", "1"]);
    let rep = json(&out);
    assert!(rep["flags"].as_array().unwrap().iter().any(|f| f == "zero input"));
    assert!(io::read_volume(&d.path().join("v.clcg")).unwrap().is_zero());
}

#[test]
fn fourier_parameters_report_degeneration() {
    let d = tempfile::tempdir().unwrap();
    small_grid(d.path(), "f.clcg");
    let out = run(
        d.path(),
        &["transform", "-i", "f.clcg", "-o", "v.clcg", "--A", "0", "--B", "1", "--C", "-1", "--D", "0", "--u-count", "1"],
    );
    let rep = json(&out);
    assert!(rep["flags"].as_array().unwrap().iter().any(|f| f == "degenerates to CST"));
    assert!(rep["admissibility"]["band"]["mean"].as_f64().unwrap() > 0.0);
    assert!(rep["timings"]["transform_s"].as_f64().is_some());
}

#[test]
fn direct_and_three_step_runs_agree() {
    let d = tempfile::tempdir().unwrap();
    small_grid(d.path(), "f.clcg");
    let common = ["-i", "f.clcg", "--A", "0.7", "--B", "1.3", "--D", "-0.4", "--u-count", "2", "--theta", "0,0.8"];
    let mut a = vec!["transform", "-o", "direct.clcg", "--path", "direct"];
    a.extend(common);
    run(d.path(), &a);
    let mut b = vec!["transform", "-o", "three.clcg", "--path", "three-step"];
    b.extend(common);
    run(d.path(), &b);
    let vd = io::read_volume(&d.path().join("direct.clcg")).unwrap();
    let vt = io::read_volume(&d.path().join("three.clcg")).unwrap();
    assert!(vt.rel_max_diff(&vd) < 1e-12);
    let mut md = vd.meta().clone();
    md.path = vt.meta().path;
    assert_eq!(serde_json::to_vec(&md).unwrap(), serde_json::to_vec(vt.meta()).unwrap());
}

#[test]
fn config_file_replaces_flags() {
    let d = tempfile::tempdir().unwrap();
    small_grid(d.path(), "f.clcg");
    let cfg = r#"{
        "n": 2,
        "grid": {"L": 6, "N": 16},
        "M": {"a": 1, "b": 2, "c": 0, "d": 1},
        "window": {"kind": "gaussian", "sigma": 0.8},
        "u_list": {"kind": "symmetric", "count": 1},
        "theta_list": [0.0],
        "path": "spectral",
        "output": {"volume": "cfg.clcg", "report": "cfg.json"}
    }"#;
    fs::write(d.path().join("run.json"), cfg).unwrap();
    run(d.path(), &["transform", "-i", "f.clcg", "--config", "run.json", "--path", "direct"]);
    let rep: Value = serde_json::from_slice(&fs::read(d.path().join("cfg.json")).unwrap()).unwrap();
    assert_eq!(rep["path"], "spectral");
    assert_eq!(rep["slices"], 4);
    let vol = io::read_volume(&d.path().join("cfg.clcg")).unwrap();
    assert_eq!(vol.meta().lct.b, 2.0);

    fs::write(d.path().join("bad.json"), cfg.replace(r#""c": 0"#, r#""c": 1"#)).unwrap();
    let out = bin()
        .current_dir(d.path())
        .args(["transform", "-i", "f.clcg", "--config", "bad.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reconstruct_and_kernel_dump() {
    let d = tempfile::tempdir().unwrap();
    run(d.path(), &["synthesize", "--kind", "gaussian", "--sigma", "0.8", "-o", "f.clcg"]);
    run(
        d.path(),
        &["transform", "-i", "f.clcg", "-o", "v.clcg", "--A", "1", "--B", "2", "--D", "1", "--sigma", "0.2", "--normalization", "raw", "--u-count", "16", "--theta", "0", "--report", "r.json"],
    );
    let rep = json(&run(d.path(), &["reconstruct", "-i", "v.clcg", "-o", "r.clcg", "--reference", "f.clcg"]));
    assert!(rep["relative_l2_error"].as_f64().unwrap() < 0.05, "{rep}");
    assert!(io::read_signal(&d.path().join("r.clcg")).is_ok());

    let out = run(d.path(), &["kernel-dump", "-o", "k.clcg", "--b", "0.375,-0.75", "--u", "1.5,2", "--b2", "-4.5,4.5"]);
    let k = io::read_signal(&d.path().join("k.clcg")).unwrap();
    assert!(k.max_abs() > 0.0);
    let kv = json(&out);
    assert!(kv["norm"].as_f64().unwrap() < 1e-8 * kv["bound"].as_f64().unwrap());
}

#[test]
fn verify_algebra_reports_anticommutation() {
    let out = run(Path::new("."), &["verify", "--suite", "algebra"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("e_i e_j + e_j e_i = −2δ_ij: pass"), "{text}");
    let out = run(Path::new("."), &["verify", "--suite", "example1", "--json"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"][0]["deviation"].as_f64().unwrap() < 1e-6);
}

#[test]
fn verify_all_exits_zero() {
    let out = bin().args(["verify", "--suite", "all"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let bad = bin().args(["verify", "--suite", "nope"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
