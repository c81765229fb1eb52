//! Random sweeps checked against routes that do not share code with the
//! implementation: residual equations, finite differences, brute-force
//! perturbation and closed-form qubit expressions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wvu_core::estimation::{
    cramer_rao_report, evolve, fisher_information, local_unbiasedness_check, optimal_estimator,
    outcome_distribution, EstimationSetup,
};
use wvu_core::inequalities::{
    equality_diagnostics, general_inequality, optimal_inequality, schroedinger_inequality,
};
use wvu_core::linops::{eigh, generator_exponential, ComplexMatrix};
use wvu_core::quantum::{PhysicsConfig, PureState};
use wvu_core::random::{random_hermitian, random_real_function, random_state};
use wvu_core::weakval::{
    optimal_proxy, spectral_basis, verify_weak_identities, weak_value_profile, SpectralBasis,
    SpectrumFunction, DEFAULT_DEGENERACY_TOL,
};
use wvu_core::C64;

fn draw(rng: &mut ChaCha8Rng, dim: usize) -> (ComplexMatrix, SpectralBasis, PureState) {
    loop {
        let a = random_hermitian(rng, dim);
        let b = random_hermitian(rng, dim);
        let psi = random_state(rng, dim);
        if let Ok(basis) = spectral_basis(&b, DEFAULT_DEGENERACY_TOL) {
            if weak_value_profile(&a, &basis, &psi).is_ok() {
                return (a, basis, psi);
            }
        }
    }
}

#[test]
fn eigh_residual_d8() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let m = random_hermitian(&mut rng, 8);
        let es = eigh(&m).unwrap();
        assert!(es.eigen_residual(&m) <= 1e-10);
    }
}

#[test]
fn exponential_unitarity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for s in [-4.0, 0.3, 2.5, 17.0] {
        let a = random_hermitian(&mut rng, 6);
        let u = generator_exponential(&a, s).unwrap();
        assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(6)) <= 1e-10);
    }
}

#[test]
fn spectral_reconstruction_d6() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let b = random_hermitian(&mut rng, 6);
    let basis = spectral_basis(&b, DEFAULT_DEGENERACY_TOL).unwrap();
    assert!(basis.reconstruction_residual() <= 1e-10);
}

#[test]
fn identities_hold_at_d8() {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..50 {
        let (a, basis, psi) = draw(&mut rng, 8);
        let f = random_real_function(&mut rng, 8);
        let r = verify_weak_identities(&a, &basis, &psi, &f).unwrap();
        assert!(r.max_residual() <= 1e-10, "{r:?}");
    }
}

#[test]
fn general_inequality_sweep() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..1000 {
        let dim = 2 + trial % 15;
        let (a, basis, psi) = draw(&mut rng, dim);
        let f = random_real_function(&mut rng, dim);
        let g = random_real_function(&mut rng, dim);
        let r = general_inequality(&a, &basis, &f, &g, &psi).unwrap();
        assert!(r.slack >= -1e-10, "trial {trial}: {r:?}");
    }
}

#[test]
fn schroedinger_sweep_d8() {
    let mut rng = ChaCha8Rng::seed_from_u64(1822);
    for _ in 0..1000 {
        let a = random_hermitian(&mut rng, 8);
        let b = random_hermitian(&mut rng, 8);
        let psi = random_state(&mut rng, 8);
        let r = schroedinger_inequality(&a, &b, &psi).unwrap();
        assert!(r.slack >= -1e-10 * (1.0 + r.lhs), "{r:?}");
    }
}

#[test]
fn diagnostics_residual_predicts_saturation() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for trial in 0..200 {
        let dim = 2 + trial % 5;
        let (a, basis, psi) = draw(&mut rng, dim);
        let d = equality_diagnostics(&a, &basis, &psi).unwrap();
        assert!(d.residual_beta <= d.residual_im + d.residual_re + 1e-10);
        let opt = optimal_inequality(&a, &basis, &psi).unwrap();
        if d.residual_im <= 1e-12 {
            assert!(opt.saturated, "{d:?} {opt:?}");
        }
        if dim == 2 {
            assert!(d.residual_im <= 1e-10 && d.residual_re <= 1e-10);
        }
    }
}

/// `Σ_i (∂_t p_i)² / p_i` with `p_i(t)` computed from an independently built
/// unitary (fresh eigendecomposition per time point) and a five-point stencil.
fn fisher_oracle(a: &ComplexMatrix, basis: &SpectralBasis, psi: &PureState, hbar: f64, t: f64) -> f64 {
    let probs = |s: f64| -> Vec<f64> {
        let u = generator_exponential(a, s / hbar).unwrap();
        let state = PureState::new(u.apply(psi.amplitudes()).unwrap()).unwrap();
        basis.weights(&state).unwrap()
    };
    let h = 1e-3;
    let (p2, p1, p0, m1, m2) = (probs(t + 2.0 * h), probs(t + h), probs(t), probs(t - h), probs(t - 2.0 * h));
    (0..p0.len())
        .map(|i| {
            let d = (-p2[i] + 8.0 * p1[i] - 8.0 * m1[i] + m2[i]) / (12.0 * h);
            d * d / p0[i]
        })
        .sum()
}

#[test]
fn fisher_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    for trial in 0..200 {
        let dim = 2 + trial % 7;
        let (a, basis, psi) = draw(&mut rng, dim);
        let hbar = [1.0, 0.5, 2.0][trial % 3];
        let t = 0.1 * (trial % 5) as f64;
        let setup = EstimationSetup::new(a.clone(), psi.clone(), 0.0, PhysicsConfig::new(hbar).unwrap()).unwrap();
        let info = fisher_information(&setup, &basis, t).unwrap();
        assert!((info.fisher - info.fisher_fd).abs() <= 1e-5 * (1.0 + info.fisher), "{info:?}");
        let oracle = fisher_oracle(&a, &basis, &psi, hbar, t);
        assert!((info.fisher - oracle).abs() <= 1e-5 * (1.0 + info.fisher), "{} vs {oracle}", info.fisher);
    }
}

#[test]
fn reference_qubit_fisher_is_four() {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let psi = PureState::new(vec![C64::new(r, 0.0), C64::new(0.0, r)]).unwrap();
    let sx = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
    let sz = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
    let basis = spectral_basis(&sz, DEFAULT_DEGENERACY_TOL).unwrap();
    let oracle = fisher_oracle(&sx, &basis, &psi, 1.0, 0.0);
    assert!((oracle - 4.0).abs() < 1e-8);
    let setup = EstimationSetup::new(sx, psi, 0.0, PhysicsConfig::default()).unwrap();
    assert!((fisher_information(&setup, &basis, 0.0).unwrap().fisher - 4.0).abs() <= 1e-9);
}

/// Random `x` with `⟨x(B)⟩ = 0` and `Σ p x Im A_w = 0`, obtained by weighted
/// Gram-Schmidt against `1` and `Im A_w`.
fn admissible_shift(rng: &mut ChaCha8Rng, weights: &[f64], im_aw: &[f64]) -> Vec<f64> {
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).zip(weights).map(|((a, b), p)| a * b * p).sum() };
    let mut x = random_real_function(rng, weights.len()).real_values().unwrap();
    let ones = vec![1.0; weights.len()];
    for basis_vec in [&ones[..], im_aw] {
        let c = dot(&x, basis_vec) / dot(basis_vec, basis_vec);
        x.iter_mut().zip(basis_vec).for_each(|(xi, bi)| *xi -= c * bi);
    }
    x
}

#[test]
fn cramer_rao_for_perturbed_unbiased_estimators() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..100 {
        let dim = 3 + trial % 5;
        let (a, basis, psi) = draw(&mut rng, dim);
        let t0 = 0.5;
        let setup = EstimationSetup::new(a.clone(), psi, t0, PhysicsConfig::default()).unwrap();
        let g_opt = optimal_estimator(&setup, &basis).unwrap();
        let at_t0 = evolve(&setup, t0).unwrap();
        let profile = weak_value_profile(&a, &basis, &at_t0).unwrap();
        let im: Vec<f64> = profile.values().iter().map(|z| z.im).collect();
        let x = admissible_shift(&mut rng, &profile.weights(), &im);
        let g = g_opt.combine(1.0, &SpectrumFunction::from_real(x), 1.0).unwrap();

        let check = local_unbiasedness_check(&g, &setup, &basis).unwrap();
        assert!(check.passes(1e-6), "{check:?}");
        assert!(check.identity_residual <= 1e-5);

        let base = cramer_rao_report(&g_opt, &setup, &basis, t0).unwrap();
        let perturbed = cramer_rao_report(&g, &setup, &basis, t0).unwrap();
        assert!(base.saturated);
        assert!(perturbed.lhs > base.lhs, "{perturbed:?} vs {base:?}");
        assert!((perturbed.rhs - base.rhs).abs() <= 1e-8 * base.rhs);
    }
}

#[test]
fn cramer_rao_agrees_with_general_inequality() {
    // With f = f_opt and g → g − ⟨g⟩, the general inequality squared and
    // rescaled by ħ²I/4 is the Cramér-Rao statement.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..100 {
        let dim = 2 + trial % 6;
        let (a, basis, psi) = draw(&mut rng, dim);
        let hbar = 0.7;
        let setup = EstimationSetup::new(a.clone(), psi.clone(), 0.0, PhysicsConfig::new(hbar).unwrap()).unwrap();
        let g = random_real_function(&mut rng, dim);
        let cr = cramer_rao_report(&g, &setup, &basis, 0.0).unwrap();

        let dist = outcome_distribution(&basis, &psi).unwrap();
        let mean = dist.mean_of(&g.real_values().unwrap());
        let centered = g.map_real(|x| x - mean).unwrap();
        let profile = weak_value_profile(&a, &basis, &psi).unwrap();
        let general = general_inequality(&a, &basis, &optimal_proxy(&profile), &centered, &psi).unwrap();

        let factor = hbar * hbar * cr.notes["fisher"] / 4.0;
        assert!((general.lhs.powi(2) - factor * cr.lhs).abs() <= 1e-9 * (1.0 + general.lhs.powi(2)));
        assert!((general.rhs.powi(2) - factor * cr.rhs).abs() <= 1e-9 * (1.0 + general.rhs.powi(2)));
    }
}

#[test]
fn unbiasedness_for_admissible_shift_on_qubit_fails_only_when_nonzero() {
    // at d = 2 the only admissible shift is zero
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (a, basis, psi) = draw(&mut rng, 2);
    let profile = weak_value_profile(&a, &basis, &psi).unwrap();
    let im: Vec<f64> = profile.values().iter().map(|z| z.im).collect();
    let x = admissible_shift(&mut rng, &profile.weights(), &im);
    assert!(x.iter().all(|v| v.abs() < 1e-10), "{x:?}");
}
