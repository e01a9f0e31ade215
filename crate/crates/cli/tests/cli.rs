use std::fs;
use std::process::{Command, Output};

use num_complex::Complex64;
use qybe_core::document::MatrixDocument;
use qybe_core::linalg::{max_abs, normalize_by_max};
use qybe_core::rop::{abc_matrix, closed_form_r};
use qybe_core::{build_spin_rep, Basis, CMat, DeformationParameter, SpinLabel};

fn qybe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qybe")).args(args).env_remove("QYBE_SEED").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn doc_matrix(text: &str) -> CMat {
    MatrixDocument::from_json(text).unwrap().to_matrix().unwrap()
}

fn assert_close(a: &CMat, b: &CMat, tol: f64) {
    let d = max_abs(&(a - b));
    assert!(d < tol, "deviation {d:e}\n{a}\n{b}");
}

#[test]
fn rep_spin_half_matches_library() {
    let o = qybe(&["rep", "--ell", "0.5", "--q", "0.3+0.4i"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let docs: Vec<MatrixDocument> = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(docs.len(), 3);
    let q = DeformationParameter::generic(Complex64::new(0.3, 0.4)).unwrap();
    let rep = build_spin_rep(SpinLabel::HALF, &q, Basis::Monomial).unwrap();
    assert_eq!(docs[0].dims, [2, 2]);
    assert_eq!(docs[0].to_matrix().unwrap(), rep.sp);
    assert_eq!(docs[1].to_matrix().unwrap(), rep.sm);
    assert_eq!(docs[2].to_matrix().unwrap(), rep.q_pow_sf(1.0));
    assert_eq!(docs[0].metadata.name.as_deref(), Some("S+"));
    assert_eq!(docs[0].metadata.q, Some([0.3, 0.4]));
}

#[test]
fn rep_cyclic_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rep");
    let o = qybe(&[
        "rep", "--cyclic", "--N", "3", "--alpha", "0.2+0.1i", "--beta", "-0.3i", "--lambda", "0.4", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["splus.json", "sminus.json", "qs.json"] {
        let doc = MatrixDocument::from_json(&fs::read_to_string(out.join(f)).unwrap()).unwrap();
        assert_eq!(doc.dims, [3, 3]);
        let c = doc.metadata.cyclic.expect("cyclic parameters recorded");
        assert_eq!((c.order, c.beta), (3, [0.0, -0.3]));
    }
}

#[test]
fn even_order_is_a_validation_error() {
    let o = qybe(&["rep", "--cyclic", "--N", "4", "--alpha", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("N must be odd"), "{}", stderr(&o));
}

#[test]
fn malformed_input_is_a_validation_error() {
    assert_eq!(qybe(&["rep", "--ell", "1/3", "--q", "0.5i"]).status.code(), Some(2));
    assert_eq!(qybe(&["rmatrix", "--l1", "1", "--l2", "1", "--u", "x", "--q", "0.5i"]).status.code(), Some(2));
    assert_eq!(qybe(&["rep", "--ell", "1", "--q", "1"]).status.code(), Some(2));
    assert_eq!(qybe(&["verify", "nonsense"]).status.code(), Some(2));
}

#[test]
fn rmatrix_spin_half_matches_closed_form() {
    let o = qybe(&["rmatrix", "--l1", "1/2", "--l2", "1/2", "--u", "0.3-0.2i", "--q", "0.7+0.6i", "--normalize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let q = DeformationParameter::generic(Complex64::new(0.7, 0.6)).unwrap();
    let gold = closed_form_r(SpinLabel::HALF, SpinLabel::HALF, Complex64::new(0.3, -0.2), &q).unwrap();
    assert_close(&doc_matrix(&stdout(&o)), &normalize_by_max(&gold), 1e-9);
}

#[test]
fn rmatrix_spin_one_in_orthonormal_frame_matches_closed_form() {
    let o = qybe(&["rmatrix", "--l1", "1", "--l2", "1", "--u", "-0.4+0.1i", "--q", "0.9+0.5i", "--basis", "orthonormal", "--normalize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let q = DeformationParameter::generic(Complex64::new(0.9, 0.5)).unwrap();
    let gold = closed_form_r(SpinLabel::ONE, SpinLabel::ONE, Complex64::new(-0.4, 0.1), &q).unwrap();
    assert_close(&doc_matrix(&stdout(&o)), &normalize_by_max(&gold), 1e-9);
}

#[test]
fn rmatrix_xxx_is_rational() {
    let o = qybe(&["rmatrix", "--l1", "1/2", "--l2", "1/2", "--u", "0.25", "--xxx", "--normalize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let u = Complex64::new(0.25, 0.0);
    let gold = abc_matrix(u + 1.0, u, Complex64::new(1.0, 0.0));
    assert_close(&doc_matrix(&stdout(&o)), &normalize_by_max(&gold), 1e-12);
}

#[test]
fn pole_exits_with_three() {
    let o = qybe(&["rmatrix", "--l1", "1/2", "--l2", "1/2", "--u", "-1", "--q", "0.8+0.4i"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("sector 1"), "{}", stderr(&o));
}

#[test]
fn verify_all_passes() {
    let o = qybe(&["verify", "all", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
}

#[test]
fn perturbation_fails_verification() {
    for suite in ["ybe", "unitarity"] {
        let o = qybe(&["verify", suite, "--samples", "2", "--perturb", "1e-6"]);
        assert_eq!(o.status.code(), Some(1), "{suite}");
        assert!(stdout(&o).contains("FAIL"));
    }
}

#[test]
fn cyclic_suite_respects_order() {
    let o = qybe(&["verify", "cyclic", "--N", "5", "--samples", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let checks: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|l| l.contains("cyclic/N=5")), "{text}");
}

#[test]
fn same_seed_same_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    let run = |seed: &str, path: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_qybe"))
            .args(["verify", "unitarity", "--samples", "3", "--json", path.to_str().unwrap()])
            .env("QYBE_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(run("11", &a).status.code(), Some(0));
    assert_eq!(run("11", &b).status.code(), Some(0));
    assert_eq!(run("12", &c).status.code(), Some(0));
    let (ta, tb, tc) = (fs::read_to_string(&a).unwrap(), fs::read_to_string(&b).unwrap(), fs::read_to_string(&c).unwrap());
    assert_eq!(ta, tb);
    assert_ne!(ta, tc);
    let v: serde_json::Value = serde_json::from_str(&ta).unwrap();
    assert_eq!(v[0]["verdict"], "pass");
}

#[test]
fn inspect_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("r.json"), dir.path().join("r2.json"));
    let o = qybe(&["rmatrix", "--l1", "1/2", "--l2", "1", "--u", "0.1+0.2i", "--q", "0.6-0.7i", "--out", first.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = qybe(&["inspect", first.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("R (xxz) 6x6"));
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}
