use proptest::prelude::*;
use qybe_core::linalg::{diag, rel_residual, rel_residual_vec, swap};
use qybe_core::qcore::re;
use qybe_core::qcore::Sampler;
use qybe_core::rep::{build_spin_rep, casimir, nilpotency_defect, orthonormal_scaling, Basis, SpinLabel};
use qybe_core::tensorrep::{lowering_laws, lowest_weight_vectors, product_vector, tensor_casimir, TwistedCoproduct};
use qybe_core::CoproductKind;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn algebra_relations_hold(seed in any::<u64>(), twice in 0u32..7) {
        let q = Sampler::new(seed).generic_q();
        for basis in [Basis::Monomial, Basis::Orthonormal] {
            let rep = build_spin_rep(SpinLabel::from_twice(twice), &q, basis).unwrap();
            let r = rep.algebra_residuals();
            prop_assert!(r.max() < 1e-10, "{:?}", r);
            prop_assert_eq!(nilpotency_defect(&rep), 0.0);
        }
    }

    #[test]
    fn bases_related_by_diagonal_similarity(seed in any::<u64>(), twice in 0u32..7) {
        let q = Sampler::new(seed).generic_q();
        let spin = SpinLabel::from_twice(twice);
        let mono = build_spin_rep(spin, &q, Basis::Monomial).unwrap();
        let ortho = build_spin_rep(spin, &q, Basis::Orthonormal).unwrap();
        let c = diag(&orthonormal_scaling(spin, &q));
        let inv = c.clone().try_inverse().unwrap();
        prop_assert!(rel_residual(&(&inv * &mono.sp * &c), &ortho.sp) < 1e-12);
        prop_assert!(rel_residual(&(&inv * &mono.sm * &c), &ortho.sm) < 1e-12);
        prop_assert!(rel_residual(&(&inv * casimir(&mono) * &c), &casimir(&ortho)) < 1e-10);
    }

    #[test]
    fn twisted_tensor_products_are_representations(seed in any::<u64>(), t1 in 0u32..4, t2 in 0u32..4) {
        let mut s = Sampler::new(seed);
        let q = s.generic_q();
        let u = s.spectral();
        let (l1, l2) = (SpinLabel::from_twice(t1), SpinLabel::from_twice(t2));
        for kind in [CoproductKind::Delta, CoproductKind::DeltaBar] {
            let cop = TwistedCoproduct::spin(l1, l2, kind, u, &q, Basis::Monomial).unwrap();
            let r = cop.gens.algebra_residuals();
            prop_assert!(r.max() < 1e-9, "{:?}", r);
            let cas = tensor_casimir(&cop, &q).unwrap();
            prop_assert!(cas.max_residual() < 1e-9);
        }
    }
}

#[test]
fn barred_vector_is_the_inverse_q_vector_and_the_swapped_one() {
    let mut s = Sampler::for_identity(42, "barred");
    for _ in 0..10 {
        let q = s.generic_q();
        let u = s.spectral();
        for (t1, t2) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            let (l1, l2) = (SpinLabel::from_twice(t1), SpinLabel::from_twice(t2));
            let sectors = lowest_weight_vectors(l1, l2, u, &q).unwrap();
            for sec in &sectors {
                let by_inversion = product_vector(l1, l2, sec.n, u, &q.inverse());
                assert!(rel_residual_vec(&sec.barred_lw, &by_inversion) < 1e-12);
                // exchanging (x₁, ℓ₁) and (x₂, ℓ₂) flips the sign of every factor
                let swapped = swap(l2.dim(), l1.dim()) * product_vector(l2, l1, sec.n, u, &q);
                let sign = if sec.n % 2 == 0 { 1.0 } else { -1.0 };
                assert!(rel_residual_vec(&(swapped * re(sign)), &sec.barred_lw) < 1e-12, "N={}", sec.n);
                assert!(sec.lw_residual < 1e-12 && sec.barred_lw_residual < 1e-12, "N={}", sec.n);
            }
        }
    }
}

#[test]
fn lowering_laws_hold_on_random_points() {
    let mut s = Sampler::for_identity(42, "lowering laws");
    for _ in 0..10 {
        let q = s.generic_q();
        let u = s.spectral();
        for (t1, t2) in [(1, 1), (1, 2), (2, 2), (3, 2)] {
            for law in lowering_laws(SpinLabel::from_twice(t1), SpinLabel::from_twice(t2), u, &q).unwrap() {
                assert!(law.residual < 1e-10, "{law:?}");
            }
        }
    }
}
