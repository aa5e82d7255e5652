use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quiverlab::hom;
use quiverlab::linalg::{self, real, CMat, Tolerances};
use quiverlab::opmodels::{self, commutant_basis, pairs::jordan, OperatorPair, SubspaceSystem};
use quiverlab::reflection::{self, Direction};
use quiverlab::{Quiver, Rep};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn kron_rep(rng: &mut ChaCha8Rng, d1: usize, d2: usize) -> Rep {
    let mats = vec![linalg::gaussian_matrix(rng, d2, d1), linalg::gaussian_matrix(rng, d2, d1)];
    Rep::new(Quiver::kronecker(), vec![d1, d2], mats).unwrap()
}

/// Rank-`r` matrix of size `n`.
fn low_rank(rng: &mut ChaCha8Rng, n: usize, r: usize) -> CMat {
    linalg::gaussian_matrix(rng, n, r) * linalg::gaussian_matrix(rng, r, n)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn jordan_commutant_dimension(k in 1usize..=6, re in -3.0f64..3.0) {
        prop_assert_eq!(commutant_basis(&jordan(k, real(re)), &tol()).unwrap().len(), k);
    }

    #[test]
    fn hom_dims_additive_and_dual(seed in any::<u64>(), d in proptest::collection::vec(0usize..=3, 4)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r1 = kron_rep(&mut rng, d[0], d[1]);
        let r2 = kron_rep(&mut rng, d[2], d[3]);
        let sum = r1.direct_sum(&r2).unwrap();
        let h = |a: &Rep, b: &Rep| hom::hom_basis(a, b).unwrap().dim;
        let end_sum = h(&sum, &sum);
        prop_assert_eq!(end_sum, h(&r1, &r1) + h(&r1, &r2) + h(&r2, &r1) + h(&r2, &r2));
        let (a, b) = reflection::dual_hom_dims(&r1, &r2, &tol()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn subspace_end_cross_check(seed in any::<u64>(), amb in 2usize..=4, count in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spans: Vec<CMat> = (0..count)
            .map(|i| linalg::gaussian_matrix(&mut rng, amb, 1 + (seed as usize + i) % amb))
            .collect();
        let names = (0..count).map(|i| format!("E{}", i + 1)).collect();
        let s = SubspaceSystem::from_spans(amb, names, spans).unwrap();
        let cc = opmodels::subspace::cross_check_end(&s, &tol()).unwrap();
        prop_assert!(cc.agrees(&tol()), "{:?}", cc);
    }

    #[test]
    fn phi_kernel_dimension(seed in any::<u64>(), n in 1usize..=4, ra in 0usize..=4, rb in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (ra, rb) = (ra.min(n), rb.min(n));
        let p = OperatorPair::new(low_rank(&mut rng, n, ra), low_rank(&mut rng, n, rb), "random").unwrap();
        let r = opmodels::phi_map(&p, &tol()).unwrap();
        let common = n.saturating_sub(ra + rb);
        prop_assert_eq!(r.expected_ker_dim, n * common);
        prop_assert_eq!(r.ker_dim, n * common);
        prop_assert!(r.membership_residual <= 1e-8);
    }

    #[test]
    fn reflection_preserves_end(seed in any::<u64>(), d1 in 1usize..=4, d2 in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = kron_rep(&mut rng, d1, d2);
        let full = reflection::is_full_at(&r, "2", Direction::Plus, &tol()).unwrap();
        prop_assume!(full);
        let e = reflection::verify_end_isomorphism(&r, "2", Direction::Plus, &tol()).unwrap();
        prop_assert!(e.is_isomorphism(&tol()), "{:?}", e);
        let d = reflection::dual(&r);
        let e = reflection::verify_end_isomorphism(&d, "2", Direction::Minus, &tol()).unwrap();
        prop_assert!(e.is_isomorphism(&tol()), "{:?}", e);
    }
}
