use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rcmtr::{build_constraints, factor, ConstraintSystem};

fn random_system(seed: u64, m: usize, n: usize) -> ConstraintSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(m, n, |_, _| rng.random_range(-1.0..1.0));
    let b = DVector::from_fn(m, |_, _| rng.random_range(-1.0..1.0));
    ConstraintSystem::new(a, b).unwrap()
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (2usize..40).prop_flat_map(|n| (1..=n, Just(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_idempotent((m, n) in dims(), seed in any::<u64>()) {
        let cs = random_system(seed, m, n);
        let basis = factor(&cs, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let g = DVector::from_fn(n, |_, _| rng.random_range(-10.0..10.0));
        let pg = basis.project_gradient(&g);
        let ppg = basis.project_gradient(&pg);
        prop_assert!((&ppg - &pg).amax() <= 1e-12 * g.amax().max(1.0));
        prop_assert!((cs.a() * &pg).amax() <= 1e-10 * g.amax().max(1.0));
    }

    #[test]
    fn restoration_is_the_nearest_feasible_point((m, n) in dims(), seed in any::<u64>()) {
        let cs = random_system(seed, m, n);
        let basis = factor(&cs, 1e-10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let x0 = DVector::from_fn(n, |_, _| rng.random_range(-5.0..5.0));
        let x = basis.restore_feasibility(&x0);
        prop_assert!(cs.infeasibility(&x) <= 1e-9);
        let again = basis.restore_feasibility(&x);
        prop_assert!((&again - &x).amax() <= 1e-9);
        let dist = (&x - &x0).norm();
        for _ in 0..20 {
            let w = DVector::from_fn(n, |_, _| rng.random_range(-5.0..5.0));
            let z = &x + basis.project_gradient(&w);
            prop_assert!(dist <= (&z - &x0).norm() + 1e-9);
        }
    }

    #[test]
    fn benchmark_constraints_have_full_row_rank(half in 1usize..120) {
        let n = 2 * half;
        let cs = build_constraints(n).unwrap();
        let basis = factor(&cs, 1e-10).unwrap();
        prop_assert_eq!(basis.rank(), n / 2);
        prop_assert_eq!(cs.infeasibility(&basis.min_norm_point()) <= 1e-9, true);
    }
}

#[test]
fn dependent_rows_are_dropped() {
    let a = DMatrix::from_row_slice(
        3,
        4,
        &[1.0, 2.0, 0.0, 1.0, 2.0, 4.0, 0.0, 2.0, 0.0, 1.0, 1.0, 0.0],
    );
    let cs = ConstraintSystem::new(a, DVector::from_row_slice(&[1.0, 2.0, 3.0])).unwrap();
    let basis = factor(&cs, 1e-10).unwrap();
    assert_eq!(basis.rank(), 2);
    let x = basis.restore_feasibility(&DVector::zeros(4));
    assert!(cs.infeasibility(&x) <= 1e-12);
}

#[test]
fn square_nonsingular_system_is_a_point() {
    let cs = ConstraintSystem::new(DMatrix::identity(3, 3) * 2.0, DVector::from_element(3, 4.0))
        .unwrap();
    let basis = factor(&cs, 1e-10).unwrap();
    assert!(basis.is_point());
    let x = basis.restore_feasibility(&DVector::from_element(3, -7.0));
    assert!((x - DVector::from_element(3, 2.0)).amax() <= 1e-14);
}
