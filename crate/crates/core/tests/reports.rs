use qybe_core::document::{Metadata, MatrixDocument, TOOL_VERSION};
use qybe_core::qcore::{c, re, ToleranceConfig};
use qybe_core::verify::{run_suite, Perturbation, SuiteOptions};
use qybe_core::{assemble_r, DeformationParameter, Error, RMode, SpinLabel, Suite};

fn small() -> ToleranceConfig {
    ToleranceConfig { sample_count: 3, ..Default::default() }
}

#[test]
fn every_suite_passes_and_reproduces() {
    for suite in [Suite::Ybe, Suite::Rll, Suite::Unitarity, Suite::Casimir, Suite::Cyclic] {
        let a = run_suite(suite, &small(), &SuiteOptions::default()).unwrap();
        assert!(!a.is_empty());
        for r in &a {
            assert!(r.passed(), "{}", r.summary_line());
        }
        let b = run_suite(suite, &small(), &SuiteOptions::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn full_run_passes() {
    let reports = run_suite(Suite::All, &ToleranceConfig::default(), &SuiteOptions::default()).unwrap();
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.summary_line()).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn perturbation_is_caught() {
    let opts = SuiteOptions { perturb: Perturbation { epsilon: 1e-6 }, ..Default::default() };
    for suite in [Suite::Ybe, Suite::Unitarity] {
        let reports = run_suite(suite, &small(), &opts).unwrap();
        assert!(reports.iter().any(|r| !r.passed()));
    }
}

#[test]
fn bad_configuration_is_rejected() {
    let opts = SuiteOptions { orders: vec![4], ..Default::default() };
    assert!(matches!(run_suite(Suite::Cyclic, &small(), &opts), Err(Error::EvenOrder(4))));
    let cfg = ToleranceConfig { sample_count: 0, ..Default::default() };
    assert!(run_suite(Suite::Ybe, &cfg, &SuiteOptions::default()).is_err());
}

#[test]
fn report_json_has_the_documented_fields() {
    let reports = run_suite(Suite::Casimir, &small(), &SuiteOptions::default()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&reports[0]).unwrap();
    for key in ["identity_id", "samples", "max_residual", "tolerance", "verdict"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn r_matrix_document_round_trip() {
    let q = DeformationParameter::generic(c(0.7, 0.6)).unwrap();
    let u = c(0.2, -0.1);
    let r = assemble_r(SpinLabel::HALF, SpinLabel::ONE, u, RMode::Xxz(q), re(1.0)).unwrap();
    let meta = Metadata {
        name: Some("R".into()),
        q: Some([q.value().re, q.value().im]),
        u: Some([u.re, u.im]),
        spins: Some(vec!["1/2".into(), "1".into()]),
        basis_tag: "monomial".into(),
        normalization: Some(r.normalization.clone()),
        tool_version: TOOL_VERSION.into(),
        ..Default::default()
    };
    let json = MatrixDocument::from_matrix(&r.matrix, meta).to_json();
    let back = MatrixDocument::from_json(&json).unwrap();
    assert_eq!(back.to_matrix().unwrap(), r.matrix);
    assert_eq!(back.to_json(), json);
}
