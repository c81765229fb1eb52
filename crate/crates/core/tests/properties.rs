use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wvu_core::inequalities::{
    covariance_inequality, optimal_inequality, rk_inequality, schroedinger_inequality,
};
use wvu_core::linops::{eigh, generator_exponential, ComplexMatrix};
use wvu_core::quantum::{expectation, moments, seminorm, PureState};
use wvu_core::random::{random_hermitian, random_real_function, random_state};
use wvu_core::weakval::{
    approximation_error, operator_function, optimal_proxy, spectral_basis, weak_value_profile,
    SpectralBasis, DEFAULT_DEGENERACY_TOL,
};
use wvu_core::Error;

/// A random instance with a usable weak-value profile, or `None` if the draw
/// hit a degenerate spectrum or a vanishing overlap.
fn instance(seed: u64, dim: usize) -> Option<(ComplexMatrix, SpectralBasis, PureState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_hermitian(&mut rng, dim);
    let b = random_hermitian(&mut rng, dim);
    let psi = random_state(&mut rng, dim);
    let basis = spectral_basis(&b, DEFAULT_DEGENERACY_TOL).ok()?;
    weak_value_profile(&a, &basis, &psi).ok()?;
    Some((a, basis, psi))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_residuals(seed in any::<u64>(), dim in 2usize..=16) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, dim);
        let es = eigh(&m).unwrap();
        let scale = 1.0 + m.max_abs();
        prop_assert!(es.reconstruction_residual(&m) <= 1e-10 * scale);
        prop_assert!(es.orthonormality_residual() <= 1e-10);
        prop_assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigh_is_deterministic(seed in any::<u64>(), dim in 2usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_hermitian(&mut rng, dim);
        let first = eigh(&m).unwrap();
        let second = eigh(&m.clone()).unwrap();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn exponential_group_law(seed in any::<u64>(), dim in 2usize..=8, s1 in -3.0f64..3.0, s2 in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, dim);
        let u1 = generator_exponential(&a, s1).unwrap();
        let u2 = generator_exponential(&a, s2).unwrap();
        let u12 = generator_exponential(&a, s1 + s2).unwrap();
        prop_assert!((&u1 * &u2).max_abs_diff(&u12) <= 1e-9);
        prop_assert!((&u1.adjoint() * &u1).max_abs_diff(&ComplexMatrix::identity(dim)) <= 1e-10);
    }

    #[test]
    fn variance_decomposition(seed in any::<u64>(), dim in 2usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_hermitian(&mut rng, dim);
        let psi = random_state(&mut rng, dim);
        let mean = expectation(&x, &psi).unwrap();
        prop_assert!(mean.im.abs() <= 1e-12 * (1.0 + mean.norm()));
        let centered = seminorm(&x.shift(mean.re), &psi).unwrap();
        let full = seminorm(&x, &psi).unwrap();
        prop_assert!((centered.powi(2) + mean.re.powi(2) - full.powi(2)).abs() <= 1e-10);
    }

    #[test]
    fn covariance_and_commutator(seed in any::<u64>(), dim in 2usize..=12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hermitian(&mut rng, dim);
        let b = random_hermitian(&mut rng, dim);
        let psi = random_state(&mut rng, dim);
        let m = moments(&a, &b, &psi).unwrap();
        prop_assert!(m.cov.abs() <= (m.var_a * m.var_b).sqrt() + 1e-10);
        prop_assert!(m.commutator_half.re.abs() <= 1e-10);
    }

    #[test]
    fn weak_values_are_phase_invariant(seed in any::<u64>(), dim in 2usize..=8, phase_seed in any::<u64>()) {
        if let Some((a, basis, psi)) = instance(seed, dim) {
            let phases: Vec<f64> = {
                let mut rng = ChaCha8Rng::seed_from_u64(phase_seed);
                (0..dim).map(|_| rand::Rng::random_range(&mut rng, 0.0..std::f64::consts::TAU)).collect()
            };
            let rotated = basis.rephased(&phases).unwrap();
            let p1 = weak_value_profile(&a, &basis, &psi).unwrap();
            let p2 = weak_value_profile(&a, &rotated, &psi).unwrap();
            for (x, y) in p1.values().iter().zip(p2.values()) {
                prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
            }
        }
    }

    #[test]
    fn weak_value_means(seed in any::<u64>(), dim in 2usize..=16) {
        if let Some((a, basis, psi)) = instance(seed, dim) {
            let p = weak_value_profile(&a, &basis, &psi).unwrap();
            let mean = p.weighted_mean();
            prop_assert!(mean.im.abs() <= 1e-10);
            prop_assert!((mean.re - expectation(&a, &psi).unwrap().re).abs() <= 1e-10);
        }
    }

    #[test]
    fn proxy_is_minimal(seed in any::<u64>(), dim in 2usize..=10) {
        if let Some((a, basis, psi)) = instance(seed, dim) {
            let p = weak_value_profile(&a, &basis, &psi).unwrap();
            let f_opt = optimal_proxy(&p);
            let best = approximation_error(&a, &f_opt, &basis, &psi).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..20 {
                let delta = random_real_function(&mut rng, dim);
                let f = f_opt.combine(1.0, &delta, 0.1).unwrap();
                prop_assert!(approximation_error(&a, &f, &basis, &psi).unwrap() >= best - 1e-12);
            }
        }
    }

    #[test]
    fn inequality_hierarchy_and_complementarity(seed in any::<u64>(), dim in 2usize..=10) {
        if let Some((a, basis, psi)) = instance(seed, dim) {
            let b = basis.source();
            let rk = rk_inequality(&a, b, &psi).unwrap();
            let opt = optimal_inequality(&a, &basis, &psi).unwrap();
            let cov = covariance_inequality(&a, &basis, &psi).unwrap();
            let sch = schroedinger_inequality(&a, b, &psi).unwrap();
            prop_assert!(opt.lhs <= rk.lhs + 1e-10);
            prop_assert!((opt.lhs.powi(2) + cov.lhs.powi(2) - sch.lhs).abs() <= 1e-9);
            for r in [&rk, &opt, &cov, &sch] {
                prop_assert!(r.holds(1e-10), "{:?}", r);
            }
        }
    }

    #[test]
    fn scale_covariance(seed in any::<u64>(), dim in 2usize..=8, c in 0.1f64..10.0) {
        if let Some((a, basis, psi)) = instance(seed, dim) {
            let scaled = a.scale_real(c);
            let b = basis.source();
            let pairs = [
                (rk_inequality(&a, b, &psi).unwrap(), rk_inequality(&scaled, b, &psi).unwrap()),
                (optimal_inequality(&a, &basis, &psi).unwrap(), optimal_inequality(&scaled, &basis, &psi).unwrap()),
                (covariance_inequality(&a, &basis, &psi).unwrap(), covariance_inequality(&scaled, &basis, &psi).unwrap()),
            ];
            for (r, s) in pairs {
                prop_assert!((s.lhs - c * r.lhs).abs() <= 1e-10 * (1.0 + c * r.lhs));
                prop_assert!((s.rhs - c * r.rhs).abs() <= 1e-10 * (1.0 + c * r.rhs));
            }
        }
    }

    #[test]
    fn operator_function_of_real_values_is_hermitian(seed in any::<u64>(), dim in 2usize..=8) {
        if let Some((_, basis, _)) = instance(seed, dim) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_real_function(&mut rng, dim);
            let fb = operator_function(&basis, &f).unwrap();
            prop_assert!(fb.max_abs_diff(&fb.adjoint()) <= 1e-12);
        }
    }
}

#[test]
fn degenerate_draws_are_reported_not_hidden() {
    let b = ComplexMatrix::identity(4);
    assert!(matches!(
        spectral_basis(&b, DEFAULT_DEGENERACY_TOL),
        Err(Error::DegenerateSpectrum { .. })
    ));
}
