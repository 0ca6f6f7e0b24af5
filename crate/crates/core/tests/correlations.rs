use ctclab::correlations::{check_invariance, min_k, min_q, random_instance, INVARIANCE_TOL};
use ctclab::{verify_lemma, CorrelationInstance, InstanceSpec};
use proptest::prelude::*;

#[test]
fn instances_survive_a_json_round_trip() {
    let inst = random_instance([2, 2, 3], 12).unwrap();
    let text = serde_json::to_string(&inst.to_spec()).unwrap();
    let back = CorrelationInstance::from_spec(serde_json::from_str::<InstanceSpec>(&text).unwrap()).unwrap();
    let (a, b) = (verify_lemma(&inst, 1e-3).unwrap(), verify_lemma(&back, 1e-3).unwrap());
    assert_eq!(a.min_q, b.min_q);
    assert_eq!(a.min_k, b.min_k);
}

#[test]
fn d3_smaller_than_d1_is_rejected() {
    assert!(random_instance([3, 2, 2], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn norm_and_modulus_forms_agree(seed in any::<u64>(), d2 in 1usize..4) {
        let inst = random_instance([2, d2, 2], seed).unwrap();
        prop_assert!(check_invariance(&inst, INVARIANCE_TOL));
        let q = min_q(&inst).unwrap().min_q;
        let k = min_k(&inst, 128).unwrap().min_k;
        prop_assert!(q.is_finite() && q >= 0.0);
        prop_assert!((k * k - (q + 1.0)).abs() <= 1e-3 * (q + 1.0));
    }
}
