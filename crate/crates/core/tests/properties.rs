use krausforge::kraus::io::{kraus_from_json, kraus_to_json};
use krausforge::kraus::{
    assemble, assemble_weighted, channel_corrections, choi_reshuffle, closure_deficit,
    extract_canonical_kraus, midpoint_nodes, superop_from_choi, synthesize, DEFAULT_CUTOFF,
};
use krausforge::model::{load_model, random_system, save_model, QuantumSystem};
use krausforge::numerics::random::{random_density, random_hermitian, random_matrix};
use krausforge::numerics::{
    expm, herm_eig, kron, kron_sum, spectral_norm, unvec, vec, ComplexMatrix, I,
};
use krausforge::superop::{exact_map, first_order_map, SuperOperator};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn system(seed: u64, d: usize, channels: usize, h_norm: f64) -> QuantumSystem {
    random_system(&mut rng(seed), d, channels, h_norm, 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vec_turns_sandwich_into_kronecker(seed in any::<u64>(), d in 1usize..=5) {
        let mut r = rng(seed);
        let (a, x, b) = (random_matrix(&mut r, d, d), random_matrix(&mut r, d, d), random_matrix(&mut r, d, d));
        let lhs = vec(&(&(&a * &x) * &b)).unwrap();
        let rhs = kron(&b.transpose(), &a).apply(&vec(&x).unwrap()).unwrap();
        let diff = lhs.iter().zip(&rhs).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        prop_assert!(diff < 1e-12, "{diff}");
        prop_assert_eq!(unvec(&vec(&x).unwrap()).unwrap(), x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermitian_eigendecomposition(seed in any::<u64>(), d in 1usize..=8, scale in 0.01f64..50.0) {
        let h = random_hermitian(&mut rng(seed), d).scale_real(scale);
        let s = herm_eig(&h).unwrap();
        let v = &s.eigenvectors;
        prop_assert!((&v.adjoint() * v).approx_eq(&ComplexMatrix::identity(d), 1e-10));
        prop_assert!(s.reconstruct().approx_eq(&h, 1e-10 * scale.max(1.0)));
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn expm_factorizes_kronecker_sums(seed in any::<u64>(), d in 1usize..=4, scale in 0.1f64..4.0) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, d, d).scale_real(scale);
        let b = random_matrix(&mut r, d, d).scale_real(scale);
        let lhs = expm(&kron_sum(&a, &b).unwrap());
        let rhs = kron(&expm(&a), &expm(&b));
        let rel = (&lhs - &rhs).frobenius_norm() / rhs.frobenius_norm();
        prop_assert!(rel < 1e-11, "{rel}");
    }

    #[test]
    fn expm_semigroup(seed in any::<u64>(), d in 1usize..=6, s in 0.1f64..3.0, t in 0.1f64..3.0) {
        let a = random_matrix(&mut rng(seed), d, d);
        let lhs = expm(&a.scale_real(s + t));
        let rhs = &expm(&a.scale_real(s)) * &expm(&a.scale_real(t));
        let rel = (&lhs - &rhs).frobenius_norm() / lhs.frobenius_norm();
        prop_assert!(rel < 1e-11, "{rel}");
    }

    #[test]
    fn model_json_round_trip(seed in any::<u64>(), d in 2usize..=4, channels in 0usize..=3) {
        let mut sys = random_system(&mut rng(seed), d, channels, 2.0, 0.1);
        sys.label = Some(format!("random {seed}"));
        prop_assert_eq!(load_model(&save_model(&sys)).unwrap(), sys);
    }

    #[test]
    fn exact_map_is_cptp(seed in any::<u64>(), d in 2usize..=4, channels in 1usize..=2, h in 0.5f64..5.0, tau in 0.05f64..3.0) {
        let s = exact_map(&system(seed, d, channels, h), tau).unwrap();
        prop_assert!(s.trace_deficit() < 1e-10);
        let j = choi_reshuffle(&s);
        prop_assert!(j.is_hermitian(1e-10));
        prop_assert!(j.min_eigenvalue().unwrap() >= -1e-10);
        prop_assert!((j.trace() - d as f64).abs() < 1e-10);
    }

    #[test]
    fn choi_extraction_reassembles(seed in any::<u64>(), d in 2usize..=4, channels in 1usize..=2, h in 0.5f64..5.0, n in 1usize..=12) {
        let sys = system(seed, d, channels, h).with_quadrature(n);
        let s = assemble(&synthesize(&sys, 1.0).unwrap());
        let terms = extract_canonical_kraus(&choi_reshuffle(&s), DEFAULT_CUTOFF).unwrap();
        prop_assert!(terms.len() <= d * d);
        let back = assemble_weighted(&terms, d);
        prop_assert!(back.distance(&s).unwrap() < 1e-10);
    }

    #[test]
    fn choi_reshuffle_inverts(seed in any::<u64>(), d in 1usize..=4) {
        let s = SuperOperator::new(random_matrix(&mut rng(seed), d * d, d * d)).unwrap();
        prop_assert_eq!(superop_from_choi(&choi_reshuffle(&s)), s);
    }

    #[test]
    fn kraus_set_invariants(seed in any::<u64>(), d in 2usize..=4, channels in 1usize..=2, h in 0.5f64..5.0, n in 1usize..=20) {
        let sys = system(seed, d, channels, h).with_quadrature(n);
        let ks = synthesize(&sys, 1.0).unwrap();
        prop_assert!(ks.k0_norm() <= 1.0 + 1e-10);
        for ((ch, list), (&eps, q)) in sys.channels.iter().zip(&ks.corrections).zip(ks.epsilons.iter().zip(&ks.quadratures)) {
            prop_assert_eq!(list.len(), n);
            for (k, w) in list.iter().zip(&q.weights) {
                prop_assert!(k.frobenius_norm() <= 2.0 * (eps * w).sqrt() * ch.collapse.frobenius_norm());
            }
        }
        let eps = sys.total_rate();
        let bound = 3.0 * eps / (n * n) as f64;
        let dist = assemble(&ks).distance(&first_order_map(&sys, 1.0).unwrap()).unwrap();
        // below four nodes a 10 rad transition phase aliases; see the pinned case below
        prop_assert!(n < 4 || dist <= bound, "{dist} > {bound}");
        prop_assert_eq!(kraus_from_json(&kraus_to_json(&ks)).unwrap(), ks);
    }

    #[test]
    fn synthesized_map_preserves_hermiticity(seed in any::<u64>(), d in 2usize..=4, h in 0.5f64..5.0) {
        let mut r = rng(seed);
        let sys = random_system(&mut r, d, 2, h, 0.05);
        let ks = synthesize(&sys, 1.0).unwrap();
        let rho = random_density(&mut r, d);
        let out = ks.apply(&rho).unwrap();
        prop_assert!(out.is_hermitian(1e-12));
        let via_superop = assemble(&ks).apply(&rho).unwrap();
        prop_assert!(via_superop.approx_eq(&out, 1e-12));
    }

    #[test]
    fn midpoint_weights_sum_to_one(n in 1usize..=10_000) {
        let q = midpoint_nodes(n).unwrap();
        let sum: f64 = q.weights.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-14 * n as f64);
        prop_assert!(q.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
    }
}

#[test]
fn three_nodes_can_exceed_first_order_bound() {
    let sys = system(6504665013825113566, 2, 1, 4.892000719469098).with_quadrature(3);
    let eps = sys.total_rate();
    let dist = assemble(&synthesize(&sys, 1.0).unwrap())
        .distance(&first_order_map(&sys, 1.0).unwrap())
        .unwrap();
    let ratio = dist / (3.0 * eps / 9.0);
    assert!(ratio > 1.3 && ratio < 1.5, "{ratio}");
    let dist = assemble(&synthesize(&sys.with_quadrature(10), 1.0).unwrap())
        .distance(&first_order_map(&sys, 1.0).unwrap())
        .unwrap();
    assert!(dist <= 3.0 * eps / 100.0);
}

#[test]
fn channels_are_synthesized_independently() {
    let sys = system(7, 3, 2, 3.0);
    let joint = synthesize(&sys, 1.0).unwrap();
    let spec = herm_eig(&sys.hamiltonian).unwrap();
    for (l, ch) in sys.channels.iter().enumerate() {
        let q = midpoint_nodes(ch.quadrature_count).unwrap();
        let alone =
            channel_corrections(&joint.k0, &spec, &ch.collapse, joint.epsilons[l], &q).unwrap();
        assert_eq!(alone, joint.corrections[l]);
    }
}

#[test]
fn closure_is_exact_without_noise() {
    for seed in 0..10 {
        let mut sys = system(seed, 3, 1, 4.0);
        sys = sys.with_rates_scaled(0.0);
        let ks = synthesize(&sys, 2.0).unwrap();
        assert!(closure_deficit(&ks) <= 1e-12);
        let u = expm(&sys.hamiltonian.scale_real(2.0).scale(-I));
        assert!(ks.k0.approx_eq(&u, 1e-12));
        assert!(spectral_norm(&ks.k0) <= 1.0 + 1e-12);
    }
}
