//! Estimating the parameter `t` of the unitary family `|ψ(t)⟩ = e^{−itA/ħ}|ψ⟩`
//! from measurements of `B`.
//!
//! The Fisher information of the outcome distribution `p(b, t) = |⟨b|ψ(t)⟩|²`
//! equals `(2/ħ)²‖Im A_w(B)‖²`, and the estimator built from `Im A_w` attains
//! the Cramér-Rao bound. Finite-difference routes are kept alongside the
//! closed forms so the two can be compared.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inequalities::InequalityReport;
use crate::linops::{check_dim, eigh, ensure_hermitian, exponential_from_eigen, ComplexMatrix, EigenSystem, DEFAULT_HERMITIAN_TOL};
use crate::quantum::{clamp_variance, expectation, seminorm, PhysicsConfig, PureState};
use crate::weakval::{operator_function, weak_value_profile, SpectralBasis, SpectrumFunction};

pub const DEFAULT_FISHER_FLOOR: f64 = 1e-10;
/// Residual bound for accepting an estimator as locally unbiased.
pub const DEFAULT_UNBIASED_TOL: f64 = 1e-6;
/// Samples per independently seeded Monte Carlo block.
pub const MC_BLOCK_LEN: usize = 4096;
pub const MC_GENERATOR: &str = "ChaCha8Rng(seed_from_u64(seed), stream = block start index)";

/// Central-difference step used for every derivative in `t`.
pub fn fd_step(t: f64) -> f64 {
    1e-5 * (1.0 + t.abs())
}

#[derive(Debug, Clone)]
pub struct EstimationSetup {
    generator: ComplexMatrix,
    base_state: PureState,
    t0: f64,
    config: PhysicsConfig,
    spectrum: EigenSystem,
}

impl EstimationSetup {
    pub fn new(
        generator: ComplexMatrix,
        base_state: PureState,
        t0: f64,
        config: PhysicsConfig,
    ) -> Result<Self> {
        ensure_hermitian(&generator, DEFAULT_HERMITIAN_TOL)?;
        check_dim(generator.dim(), base_state.dim())?;
        if !t0.is_finite() {
            return Err(Error::InvalidParameter(format!("t0 must be finite, got {t0}")));
        }
        let spectrum = eigh(&generator)?;
        Ok(Self { generator, base_state, t0, config, spectrum })
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn base_state(&self) -> &PureState {
        &self.base_state
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn hbar(&self) -> f64 {
        self.config.hbar
    }

    pub fn config(&self) -> PhysicsConfig {
        self.config
    }
}

/// `|ψ(t)⟩ = exp(−i t A/ħ)|ψ⟩`
pub fn evolve(setup: &EstimationSetup, t: f64) -> Result<PureState> {
    if t == 0.0 {
        return Ok(setup.base_state.clone());
    }
    let u = exponential_from_eigen(&setup.spectrum, t / setup.config.hbar);
    PureState::new(u.apply(setup.base_state.amplitudes())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn mean_of(&self, values: &[f64]) -> f64 {
        self.probabilities.iter().zip(values).map(|(p, x)| p * x).sum()
    }

    /// Centered second moment of `values` under the distribution.
    pub fn variance_of(&self, values: &[f64]) -> Result<f64> {
        let mean = self.mean_of(values);
        let var = self.probabilities.iter().zip(values).map(|(p, x)| p * (x - mean).powi(2)).sum();
        clamp_variance(var)
    }
}

pub fn outcome_distribution(basis: &SpectralBasis, psi: &PureState) -> Result<OutcomeDistribution> {
    Ok(OutcomeDistribution { probabilities: basis.weights(psi)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherInfo {
    pub t: f64,
    /// `(2/ħ)²‖Im A_w(B)‖²` on `ψ(t)`.
    pub fisher: f64,
    /// `Σ_i (∂_t p_i)² / p_i` with central differences.
    pub fisher_fd: f64,
}

pub fn fisher_information(setup: &EstimationSetup, basis: &SpectralBasis, t: f64) -> Result<FisherInfo> {
    let psi = evolve(setup, t)?;
    let profile = weak_value_profile(&setup.generator, basis, &psi)?;
    let scale = 2.0 / setup.config.hbar;
    let fisher = (scale * profile.im_norm()).powi(2);

    let h = fd_step(t);
    let p = profile.weights();
    let plus = basis.weights(&evolve(setup, t + h)?)?;
    let minus = basis.weights(&evolve(setup, t - h)?)?;
    let fisher_fd = p
        .iter()
        .zip(plus.iter().zip(&minus))
        .map(|(pi, (pp, pm))| ((pp - pm) / (2.0 * h)).powi(2) / pi)
        .sum();
    Ok(FisherInfo { t, fisher, fisher_fd })
}

/// `g_opt(b) = 2/(ħ I(t0))·Im A_w(b) + t0`, the efficient locally unbiased estimator.
pub fn optimal_estimator(setup: &EstimationSetup, basis: &SpectralBasis) -> Result<SpectrumFunction> {
    optimal_estimator_with_floor(setup, basis, DEFAULT_FISHER_FLOOR)
}

pub fn optimal_estimator_with_floor(
    setup: &EstimationSetup,
    basis: &SpectralBasis,
    fisher_floor: f64,
) -> Result<SpectrumFunction> {
    let psi = evolve(setup, setup.t0)?;
    let profile = weak_value_profile(&setup.generator, basis, &psi)?;
    let hbar = setup.config.hbar;
    let fisher = (2.0 / hbar * profile.im_norm()).powi(2);
    if !(fisher > fisher_floor) {
        return Err(Error::VanishingFisher { fisher, floor: fisher_floor });
    }
    let c = 2.0 / (hbar * fisher);
    Ok(SpectrumFunction::from_real(profile.values().iter().map(|v| c * v.im + setup.t0).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnbiasednessCheck {
    /// `⟨g(B)⟩` on `ψ(t0)`.
    pub mean: f64,
    /// Central-difference `d⟨g(B)⟩/dt` at `t0`.
    pub slope_fd: f64,
    /// `(i/ħ)⟨[A, g(B)]⟩` at `t0`.
    pub slope_commutator: f64,
    pub mean_residual: f64,
    pub slope_residual: f64,
    /// `|⟨[g(B), A]⟩ − iħ|`
    pub conjugacy_residual: f64,
    /// `|slope_fd − slope_commutator|`
    pub identity_residual: f64,
}

impl UnbiasednessCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.mean_residual <= tol && self.slope_residual <= tol && self.conjugacy_residual <= tol
    }
}

/// `d⟨g(B)⟩/dt = (i/ħ)⟨[A, g(B)]⟩` evaluated on `psi`.
fn commutator_slope(setup: &EstimationSetup, gb: &ComplexMatrix, psi: &PureState) -> Result<f64> {
    let comm = expectation(&setup.generator.commutator(gb)?, psi)?;
    Ok((C64::i() * comm / setup.config.hbar).re)
}

pub fn local_unbiasedness_check(
    g: &SpectrumFunction,
    setup: &EstimationSetup,
    basis: &SpectralBasis,
) -> Result<UnbiasednessCheck> {
    let values = g.real_values()?;
    check_dim(basis.dim(), values.len())?;
    let t0 = setup.t0;
    let psi = evolve(setup, t0)?;
    let mean = outcome_distribution(basis, &psi)?.mean_of(&values);

    let h = fd_step(t0);
    let up = outcome_distribution(basis, &evolve(setup, t0 + h)?)?.mean_of(&values);
    let down = outcome_distribution(basis, &evolve(setup, t0 - h)?)?.mean_of(&values);
    let slope_fd = (up - down) / (2.0 * h);

    let gb = operator_function(basis, g)?;
    let slope_commutator = commutator_slope(setup, &gb, &psi)?;
    let conj = expectation(&gb.commutator(&setup.generator)?, &psi)?;

    Ok(UnbiasednessCheck {
        mean,
        slope_fd,
        slope_commutator,
        mean_residual: (mean - t0).abs(),
        slope_residual: (slope_fd - 1.0).abs(),
        conjugacy_residual: (conj - C64::new(0.0, setup.config.hbar)).norm(),
        identity_residual: (slope_fd - slope_commutator).abs(),
    })
}

/// `Var[g(B)] ≥ (d⟨g(B)⟩/dt)² / I(t)` on `ψ(t)`.
pub fn cramer_rao_report(
    g: &SpectrumFunction,
    setup: &EstimationSetup,
    basis: &SpectralBasis,
    t: f64,
) -> Result<InequalityReport> {
    let values = g.real_values()?;
    check_dim(basis.dim(), values.len())?;
    let info = fisher_information(setup, basis, t)?;
    if !(info.fisher > DEFAULT_FISHER_FLOOR) {
        return Err(Error::VanishingFisher { fisher: info.fisher, floor: DEFAULT_FISHER_FLOOR });
    }
    let psi = evolve(setup, t)?;
    let variance = outcome_distribution(basis, &psi)?.variance_of(&values)?;
    let slope = commutator_slope(setup, &operator_function(basis, g)?, &psi)?;
    Ok(InequalityReport::new("cramer_rao", variance, slope * slope / info.fisher)
        .note("fisher", info.fisher)
        .note("slope", slope))
}

/// `‖H − f(B)‖·‖t0 − g(B)‖ ≥ ħ/2` on `ψ(t0)`, for locally unbiased `g`.
pub fn time_energy_report(
    setup: &EstimationSetup,
    basis: &SpectralBasis,
    f: &SpectrumFunction,
    g: &SpectrumFunction,
) -> Result<InequalityReport> {
    time_energy_report_with_tol(setup, basis, f, g, DEFAULT_UNBIASED_TOL)
}

pub fn time_energy_report_with_tol(
    setup: &EstimationSetup,
    basis: &SpectralBasis,
    f: &SpectrumFunction,
    g: &SpectrumFunction,
    unbiased_tol: f64,
) -> Result<InequalityReport> {
    f.real_values()?;
    let check = local_unbiasedness_check(g, setup, basis)?;
    if !check.passes(unbiased_tol) {
        return Err(Error::NotLocallyUnbiased {
            mean_residual: check.mean_residual,
            slope_residual: check.slope_residual,
            conjugacy_residual: check.conjugacy_residual,
        });
    }
    let psi = evolve(setup, setup.t0)?;
    let energy_err = seminorm(&(&setup.generator - &operator_function(basis, f)?), &psi)?;
    let time_err = seminorm(&operator_function(basis, g)?.shift(setup.t0), &psi)?;
    Ok(InequalityReport::new("time_energy", energy_err * time_err, setup.config.hbar / 2.0)
        .note("energy_error", energy_err)
        .note("time_error", time_err)
        .note("unbiased_tol", unbiased_tol))
}

/// Everything about the optimal estimator at `t0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FisherReport {
    pub t0: f64,
    pub fisher: f64,
    pub fisher_fd: f64,
    pub estimator: Vec<f64>,
    /// `1/I(t0)`
    pub cr_bound: f64,
    pub variance_g: f64,
    pub unbiased_mean: f64,
    pub unbiased_slope: f64,
}

pub fn fisher_report(setup: &EstimationSetup, basis: &SpectralBasis) -> Result<FisherReport> {
    let info = fisher_information(setup, basis, setup.t0)?;
    let g = optimal_estimator(setup, basis)?;
    let values = g.real_values()?;
    let check = local_unbiasedness_check(&g, setup, basis)?;
    let variance_g =
        outcome_distribution(basis, &evolve(setup, setup.t0)?)?.variance_of(&values)?;
    Ok(FisherReport {
        t0: setup.t0,
        fisher: info.fisher,
        fisher_fd: info.fisher_fd,
        estimator: values,
        cr_bound: 1.0 / info.fisher,
        variance_g,
        unbiased_mean: check.mean,
        unbiased_slope: check.slope_fd,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub n_samples: usize,
    pub seed: u64,
    pub generator: String,
    pub empirical_mean: f64,
    /// Unbiased (`n − 1`) sample variance; zero when `n = 1`.
    pub empirical_variance: f64,
    pub standard_error_mean: f64,
}

#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

/// Draws `n` outcomes of `B` on `ψ(t0)` by inverse CDF and reports the sample
/// moments of `g(b)`.
///
/// Samples are generated in blocks of [`MC_BLOCK_LEN`]; each block has its
/// own ChaCha stream keyed by `(seed, block start)` and block statistics are
/// merged in index order, so the result does not depend on thread count.
pub fn monte_carlo_estimate(
    setup: &EstimationSetup,
    basis: &SpectralBasis,
    g: &SpectrumFunction,
    n: usize,
    seed: u64,
) -> Result<MonteCarloResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let values = g.real_values()?;
    check_dim(basis.dim(), values.len())?;
    let dist = outcome_distribution(basis, &evolve(setup, setup.t0)?)?;
    let mut cdf: Vec<f64> = dist
        .probabilities
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p;
            Some(*acc)
        })
        .collect();
    // the last bucket absorbs round-off in the total
    if let Some(last) = cdf.last_mut() {
        *last = f64::INFINITY;
    }

    let starts: Vec<usize> = (0..n).step_by(MC_BLOCK_LEN).collect();
    let blocks: Vec<Moments> = starts
        .par_iter()
        .map(|&start| {
            let len = MC_BLOCK_LEN.min(n - start);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(start as u64);
            let mut m = Moments { count: 0, mean: 0.0, m2: 0.0 };
            for _ in 0..len {
                let u: f64 = rng.random();
                let idx = cdf.partition_point(|&c| c <= u);
                let x = values[idx];
                m.count += 1;
                let delta = x - m.mean;
                m.mean += delta / m.count as f64;
                m.m2 += delta * (x - m.mean);
            }
            m
        })
        .collect();
    let total = blocks
        .into_iter()
        .fold(Moments { count: 0, mean: 0.0, m2: 0.0 }, Moments::merge);

    let empirical_variance = if n > 1 { (total.m2 / (n - 1) as f64).max(0.0) } else { 0.0 };
    Ok(MonteCarloResult {
        n_samples: n,
        seed,
        generator: MC_GENERATOR.to_string(),
        empirical_mean: total.mean,
        empirical_variance,
        standard_error_mean: (empirical_variance / n as f64).sqrt(),
    })
}
