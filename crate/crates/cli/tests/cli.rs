use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use curvcone::{kn_square, sphere_tensor, AlgebraicCurvatureTensor, Biform, Sym2Form, TensorDoc};
use serde_json::Value;

fn curvcone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvcone")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn tensor_file(name: &str, t: impl Into<TensorDoc>) -> PathBuf {
    temp_file(name, &serde_json::to_string(&t.into()).unwrap())
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn sphere_file_is_in_the_costar_cone() {
    let f = tensor_file("sphere3.json", sphere_tensor(3, 1.0).unwrap());
    let out = curvcone(&["cone-check", path(&f), "--cone", "costar"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["schema"], "curvcone.report.v1");
    assert_eq!(r["result"]["verdict"], "member");
    let parts = r["result"]["certificate"]["decomposition"].as_array().unwrap();
    assert!(!parts.is_empty());
    assert_eq!(r["manifest"]["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn su3_is_outside_costar_with_a_dual_certificate() {
    let out = curvcone(&["cone-check", "--builtin", "su3", "--cone", "costar"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let cert = &report(&out)["result"]["certificate"];
    assert_eq!(cert["verdict"], "non_member");
    assert_eq!(cert["dual_functional"]["type"], "biform");
    assert!(cert["dual_check"]["pairing"].as_f64().unwrap() < 0.0);
    assert!((cert["residual"].as_f64().unwrap() - 0.301512).abs() < 1e-4);
}

#[test]
fn su3_has_psd_curvature_operator() {
    let out = curvcone(&["cone-check", "--builtin", "su3", "--cone", "q"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    let spectrum: Vec<f64> = r["result"]["spectrum"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(spectrum.len(), 28);
    assert_eq!(spectrum.iter().filter(|v| (*v - 1.0).abs() < 1e-10).count(), 8);
    assert_eq!(spectrum.iter().filter(|v| v.abs() < 1e-10).count(), 20);
}

#[test]
fn sectional_cone_gives_a_witness_plane() {
    let neg = tensor_file("neg_sphere.json", sphere_tensor(4, -1.0).unwrap());
    let out = curvcone(&["cone-check", path(&neg), "--cone", "sec"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert!((r["result"]["min_sectional"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert_eq!(r["result"]["witness"]["x"].as_array().unwrap().len(), 4);
    let out = curvcone(&["cone-check", "--builtin", "s2xr:4", "--cone", "sec"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn cplus_reads_phi_and_sym4() {
    let s = Sym2Form::diag(&[1.0, 2.0, 0.5]);
    let phi = curvcone::phi_from_forms(std::slice::from_ref(&s)).unwrap();
    let f = tensor_file("phi.json", phi);
    let out = curvcone(&["cone-check", path(&f), "--cone", "cplus"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let e = curvcone::Sym4Form::sym_square(&s).scale(-1.0);
    let f = tensor_file("neg_sym4.json", e);
    let out = curvcone(&["cone-check", path(&f), "--cone", "cplus"]);
    assert_eq!(code(&out), 1, "{}", stderr(&out));
    let out = curvcone(&["cone-check", "--builtin", "su3", "--cone", "cplus"]);
    assert_eq!(code(&out), 65);
}

fn bounds(args: &[&str]) -> (f64, f64) {
    let out = curvcone(args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    (r["result"]["lower"].as_f64().unwrap(), r["result"]["upper"].as_f64().unwrap())
}

#[test]
fn cosec_bounds_examples() {
    let tol = 1e-6;
    let (lo, _) = bounds(&["cosec-bounds", "--builtin", "sphere:4"]);
    assert!((lo - 1.0).abs() <= tol, "{lo}");
    let f = tensor_file("sphere5x3.json", sphere_tensor(5, 3.0).unwrap());
    let (lo, _) = bounds(&["cosec-bounds", path(&f)]);
    assert!((lo - 3.0).abs() <= 3.0 * tol, "{lo}");
    let f = tensor_file("zero.json", AlgebraicCurvatureTensor::zeros(4));
    let (lo, hi) = bounds(&["cosec-bounds", path(&f)]);
    assert!(lo.abs() <= tol && hi.abs() <= tol, "{lo} {hi}");
    let f = tensor_file("neg2.json", sphere_tensor(3, -2.0).unwrap());
    let (_, hi) = bounds(&["cosec-bounds", path(&f)]);
    assert!((hi - 2.0).abs() <= 2.0 * tol, "{hi}");
}

const CUBE_OFF: &str = "OFF\n# unit cube\n8 6 12\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 0 1\n1 0 1\n1 1 1\n0 1 1\n\
4 0 3 2 1\n4 4 5 6 7\n4 0 1 5 4\n4 1 2 6 5\n4 2 3 7 6\n4 3 0 4 7\n";

#[test]
fn poly_report_cube_saddle_and_flat_torus() {
    let f = temp_file("cube.off", CUBE_OFF);
    let out = curvcone(&["poly-report", path(&f)]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert!((r["result"]["total_deficit"].as_f64().unwrap() - 4.0 * PI).abs() < 1e-12);
    assert_eq!(r["result"]["measure"]["atoms"].as_array().unwrap().len(), 8);
    assert!(r["result"]["scalar_curvature_convention"].as_str().unwrap().contains("2σ₂"));

    let out = curvcone(&["poly-report", "--builtin", "saddle7"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    let worst = &r["result"]["curvature_bound"]["worst"];
    assert!(worst["total_angle"].as_f64().unwrap() > 2.0 * PI);
    assert_eq!(worst["hyperedge"].as_array().unwrap().len(), 1);

    let out = curvcone(&["poly-report", "--builtin", "flat-torus:4"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    for h in r["result"]["hyperedges"].as_array().unwrap() {
        assert!(h["deficit"].as_f64().unwrap().abs() < 1e-12);
    }

    let out = curvcone(&["poly-report", "--builtin", "cube", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("hyperedge,interior")));
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "body");
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn steiner_study_sphere_and_cube() {
    let out = curvcone(&["steiner-study", "sphere", "--levels", "1..5", "--weight", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    for r in &rows[3..] {
        let rel: f64 = r[14].parse().unwrap();
        assert!(rel < 0.01, "level {}: {rel}", r[1]);
    }

    let out = curvcone(&["steiner-study", "sphere", "--levels", "4", "--weight", "z", "--format", "json"]);
    let r = report(&out);
    assert!(r["result"]["levels"][0]["curvature_integral"].as_f64().unwrap().abs() < 1e-9);

    let out = curvcone(&["steiner-study", "cube", "--format", "json"]);
    let r = report(&out);
    let fitted = &r["result"]["levels"][0]["fitted"];
    for (k, want) in [6.0, 3.0 * PI, 4.0 * PI / 3.0].into_iter().enumerate() {
        assert!((fitted[k + 1].as_f64().unwrap() - want).abs() < 1e-9);
    }
    let out = curvcone(&["steiner-study", "sphere", "--levels", "2..x"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn twist_verify_examples() {
    let out = curvcone(&["twist-verify", "--q", "2", "--c", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert!(r["result"]["max_metric_residual"].as_f64().unwrap() < 1e-6);
    assert!(r["result"]["max_e_error"].as_f64().unwrap() < 1e-4);
    assert_eq!(r["result"]["points"].as_array().unwrap().len(), 32);

    let out = curvcone(&["twist-verify", "--q", "2", "--c", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    assert_eq!(r["result"]["twist"]["a"].as_f64().unwrap(), 0.0);
    assert!(r["result"]["max_e_error"].as_f64().unwrap() < 1e-12);

    let out = curvcone(&["twist-verify", "--q", "7"]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("--compose"));
    let out = curvcone(&["twist-verify", "--q", "4", "--c", "0.5", "--compose", "--points", "4"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn su3_trace() {
    let out = curvcone(&["su3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let r = report(&out);
    let op = &r["result"]["operator"];
    assert_eq!(op["eigenvalue_one_count"], 8);
    assert_eq!(op["eigenvalue_zero_count"], 20);
    assert_eq!(op["tensor"]["data"].as_array().unwrap().len(), 28 * 28);
    for s in r["result"]["torus"]["samples"].as_array().unwrap() {
        assert_eq!(s["ad_coefficients"], s["expected"]);
    }
    assert_eq!(r["result"]["cones"]["costar"]["verdict"], "non_member");
    assert_eq!(r["result"]["cones"]["q"]["verdict"], "member");
}

#[test]
fn input_errors_have_distinct_exit_codes() {
    let f = temp_file("broken.json", "{\"dim\": 3,\n \"kind\": \"biform\" \"data\": []}");
    let out = curvcone(&["cone-check", path(&f)]);
    assert_eq!(code(&out), 64);
    assert!(stderr(&out).contains("line 2, column"), "{}", stderr(&out));

    let mut m = nalgebra::DMatrix::zeros(6, 6);
    m[(0, 5)] = 1.0;
    m[(5, 0)] = 1.0;
    let f = tensor_file("not_bianchi.json", Biform::new(4, m).unwrap());
    let out = curvcone(&["cone-check", path(&f)]);
    assert_eq!(code(&out), 65, "{}", stderr(&out));

    let f = tensor_file("sym2.json", Sym2Form::identity(3));
    assert_eq!(code(&curvcone(&["cone-check", path(&f)])), 65);
    assert_eq!(code(&curvcone(&["cone-check", path(&f), "--builtin", "su3"])), 64);
    assert_eq!(code(&curvcone(&["cone-check"])), 64);
    assert_eq!(code(&curvcone(&["cone-check", "--builtin", "hyperbolic:3"])), 64);
    assert_eq!(code(&curvcone(&["cone-check", "--builtin", "su3", "--cone", "nope"])), 64);
    assert_eq!(code(&curvcone(&["cone-check", path(&f), "--tol", "-1"])), 64);
    assert_eq!(code(&curvcone(&["cone-check", "/nonexistent/t.json"])), 65);
    assert_eq!(code(&curvcone(&["--help"])), 0);
}

fn without_wall_time(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).lines().filter(|l| !l.contains("wall_time_seconds")).collect::<Vec<_>>().join("\n")
}

#[test]
fn reports_are_deterministic() {
    let s = Sym2Form::from_rows(&[&[1.0, 0.2, -0.4, 0.0], &[0.2, -0.5, 0.1, 0.3], &[-0.4, 0.1, 0.8, 0.0], &[0.0, 0.3, 0.0, 0.2]]).unwrap();
    let f = tensor_file("generic.json", kn_square(&s));
    let runs: [&[&str]; 4] = [
        &["cone-check", path(&f), "--cone", "costar", "--seed", "7"],
        &["cone-check", path(&f), "--cone", "sec", "--seed", "7"],
        &["twist-verify", "--q", "3", "--c", "0.5", "--seed", "7"],
        &["steiner-study", "sphere", "--levels", "1..2", "--weight", "bump"],
    ];
    for args in runs {
        let a = curvcone(args);
        let b = Command::new(env!("CARGO_BIN_EXE_curvcone")).args(args).env("CURVCONE_THREADS", "1").output().unwrap();
        assert_eq!(code(&a), code(&b));
        assert_eq!(without_wall_time(&a), without_wall_time(&b), "{args:?}");
    }
    let seeded = |seed: &str| without_wall_time(&curvcone(&["twist-verify", "--seed", seed, "--points", "3"]));
    assert_ne!(seeded("1"), seeded("2"));
    let out = Command::new(env!("CARGO_BIN_EXE_curvcone")).args(["su3", "--format", "csv"]).env("CURVCONE_THREADS", "zero").output().unwrap();
    assert_eq!(code(&out), 64);
}
