use ctclab::extension::{average_state, restrict};
use ctclab::gates::swap_unitary;
use ctclab::linalg::operator_norm;
use ctclab::random::{random_density, random_hermitian, random_unitary};
use ctclab::{build_sequence, deviation_bound_check, seeded_rng, ComplexMatrix, DensityMatrix, Subsystem};
use proptest::prelude::*;

#[test]
fn swap_sequence_alternates_into_rho_a() {
    let mut rng = seeded_rng(8);
    let rho_a = random_density(2, &mut rng);
    let seed_b = random_density(2, &mut rng);
    let seq = build_sequence(&swap_unitary(2), &rho_a, &seed_b, 5).unwrap();
    let marginals = seq.b_marginals();
    assert!(marginals[0].trace_distance_to(&seed_b) < 1e-14);
    for m in &marginals[1..] {
        assert!(m.trace_distance_to(&rho_a) < 1e-14);
    }
}

#[test]
fn zero_length_is_rejected() {
    let u = swap_unitary(2);
    let r = DensityMatrix::maximally_mixed(2);
    assert!(build_sequence(&u, &r, &r, 0).is_err());
}

#[test]
fn samples_above_the_norm_bound_are_rejected() {
    let u = swap_unitary(2);
    let r = DensityMatrix::maximally_mixed(2);
    let seq = build_sequence(&u, &r, &r, 3).unwrap();
    let big = ComplexMatrix::identity(2).scale_real(2.0);
    assert!(deviation_bound_check(&seq, 3, &[big], 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deviation_never_exceeds_two_r_over_n(seed in any::<u64>(), n in 1usize..150, r in 0.1f64..5.0) {
        let mut rng = seeded_rng(seed);
        let u = random_unitary(6, &mut rng);
        let rho_a = random_density(3, &mut rng);
        let seed_b = random_density(2, &mut rng);
        let samples: Vec<ComplexMatrix> = (0..5)
            .map(|_| {
                let h = random_hermitian(2, &mut rng);
                h.scale_real(r / operator_norm(&h))
            })
            .collect();
        let seq = build_sequence(&u, &rho_a, &seed_b, n).unwrap();
        let report = deviation_bound_check(&seq, n, &samples, r).unwrap();
        prop_assert!(report.within_bound());
        prop_assert!(report.max_telescoping_gap < 1e-10);
        prop_assert!(report.marginal_residual < 1e-12);
    }

    #[test]
    fn every_average_is_a_state_with_marginal_rho_a(seed in any::<u64>(), n in 1usize..40) {
        let mut rng = seeded_rng(seed);
        let u = random_unitary(4, &mut rng);
        let rho_a = random_density(2, &mut rng);
        let seq = build_sequence(&u, &rho_a, &DensityMatrix::maximally_mixed(2), n).unwrap();
        let omega = average_state(&seq, n).unwrap();
        let m = omega.matrix();
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(m.is_hermitian(1e-12));
        prop_assert!(restrict(&omega, Subsystem::A).matrix().max_abs_diff(rho_a.matrix()) < 1e-12);
    }
}
