use num_complex::Complex64;
use proptest::prelude::*;
use qybe_core::qcore::{c, phi_identity_check, qnum, DeformationParameter, Sampler};

fn q_from(seed: u64) -> DeformationParameter {
    Sampler::new(seed).generic_q()
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bracket_is_odd(seed in any::<u64>(), x in -4.0f64..4.0, y in -1.0f64..1.0) {
        let q = q_from(seed);
        let n = c(x, y);
        prop_assert!(close(qnum(-n, &q).unwrap(), -qnum(n, &q).unwrap(), 1e-12));
    }

    #[test]
    fn bracket_is_inversion_symmetric(seed in any::<u64>(), x in -4.0f64..4.0, y in -1.0f64..1.0) {
        let q = q_from(seed);
        let n = c(x, y);
        prop_assert!(close(qnum(n, &q).unwrap(), qnum(n, &q.inverse()).unwrap(), 1e-12));
    }

    #[test]
    fn bracket_is_periodic_at_roots_of_unity(k in 0usize..3, x in -2.0f64..2.0, y in -0.5f64..0.5) {
        let order = [3, 5, 7][k];
        let q = DeformationParameter::root_of_unity(order).unwrap();
        let n = c(x, y);
        prop_assert!(close(qnum(n + order as f64, &q).unwrap(), qnum(n, &q).unwrap(), 1e-11));
    }

    #[test]
    fn phi_product_matches_closed_form(k in 0usize..3, x in -2.0f64..2.0, y in -0.5f64..0.5) {
        let q = DeformationParameter::root_of_unity([3, 5, 7][k]).unwrap();
        let check = phi_identity_check(c(x, y), &q).unwrap();
        prop_assert!(check.residual < 1e-10, "{:?}", check);
    }
}

#[test]
fn twenty_seeded_phi_draws_per_order() {
    for order in [3, 5, 7] {
        let q = DeformationParameter::root_of_unity(order).unwrap();
        let mut s = Sampler::for_identity(42, "phi");
        for _ in 0..20 {
            let r = phi_identity_check(s.unit_complex(), &q).unwrap();
            assert!(r.residual < 1e-10, "N={order}: {r:?}");
        }
    }
}

#[test]
fn bracket_at_pole_of_denominator_is_rejected() {
    let q = DeformationParameter::root_of_unity(3).unwrap();
    assert!(qnum(c(1.0, 0.0), &q).is_ok());
    assert!(DeformationParameter::generic(c(1.0, 0.0)).is_err());
    assert!(DeformationParameter::generic(c(-1.0, 0.0)).is_err());
}
