//! Both sides of each uncertainty inequality, plus the coefficients of the
//! equality conditions.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{check_dim, norm2, ComplexMatrix};
use crate::quantum::{expectation, moments, seminorm, std_dev, PureState};
use crate::weakval::{
    operator_function, optimal_proxy, weak_value_profile, SpectralBasis, SpectrumFunction,
};

/// Relative tolerance for calling an inequality saturated.
pub const DEFAULT_SAT_TOL: f64 = 1e-8;
/// Relative slack below zero still accepted as round-off.
pub const DEFAULT_HOLD_TOL: f64 = 1e-10;
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs − rhs`
    pub slack: f64,
    pub saturated: bool,
    /// Auxiliary values attached by the producing operation.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub notes: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_sat_tol(name, lhs, rhs, DEFAULT_SAT_TOL)
    }

    pub fn with_sat_tol(name: impl Into<String>, lhs: f64, rhs: f64, sat_tol: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            name: name.into(),
            lhs,
            rhs,
            slack,
            saturated: slack.abs() <= sat_tol * (1.0 + lhs.abs()),
            notes: BTreeMap::new(),
        }
    }

    pub fn note(mut self, key: &str, value: f64) -> Self {
        self.notes.insert(key.to_string(), value);
        self
    }

    /// `slack ≥ −tol·(1 + lhs)`
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol * (1.0 + self.lhs.abs())
    }

    /// Amount by which the inequality fails, relative to `1 + lhs`; zero when it holds.
    pub fn violation(&self) -> f64 {
        (-self.slack).max(0.0) / (1.0 + self.lhs.abs())
    }
}

/// `‖A − f(B)‖·‖g(B)‖ ≥ ½|⟨[A, g(B)]⟩|` for real `f`, `g`.
pub fn general_inequality(
    a: &ComplexMatrix,
    basis: &SpectralBasis,
    f: &SpectrumFunction,
    g: &SpectrumFunction,
    psi: &PureState,
) -> Result<InequalityReport> {
    f.real_values()?;
    g.real_values()?;
    check_dim(basis.dim(), a.dim())?;
    let fb = operator_function(basis, f)?;
    let gb = operator_function(basis, g)?;
    let lhs = seminorm(&(a - &fb), psi)? * seminorm(&gb, psi)?;
    let rhs = 0.5 * expectation(&a.commutator(&gb)?, psi)?.norm();
    Ok(InequalityReport::new("general", lhs, rhs))
}

/// `σ(A)·σ(B) ≥ ½|⟨[A,B]⟩|`
pub fn rk_inequality(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<InequalityReport> {
    let m = moments(a, b, psi)?;
    let lhs = m.var_a.sqrt() * m.var_b.sqrt();
    Ok(InequalityReport::new("robertson_kennard", lhs, m.commutator_half.norm()))
}

/// `‖A − Re A_w(B)‖·σ(B) ≥ ½|⟨[A,B]⟩|`. The RK left side is attached as note `rk_lhs`.
pub fn optimal_inequality(
    a: &ComplexMatrix,
    basis: &SpectralBasis,
    psi: &PureState,
) -> Result<InequalityReport> {
    let b = basis.source();
    let profile = weak_value_profile(a, basis, psi)?;
    let f_opt = operator_function(basis, &optimal_proxy(&profile))?;
    let sigma_b = std_dev(b, psi)?;
    let lhs = seminorm(&(a - &f_opt), psi)? * sigma_b;
    let m = moments(a, b, psi)?;
    let rk_lhs = m.var_a.sqrt() * m.var_b.sqrt();
    Ok(InequalityReport::new("optimal", lhs, m.commutator_half.norm()).note("rk_lhs", rk_lhs))
}

/// `‖Re A_w(B) − ⟨A⟩‖·σ(B) ≥ |½⟨{A,B}⟩ − ⟨A⟩⟨B⟩|`.
///
/// The right side is also computed as the classical covariance
/// `Cov[Re A_w(B), B]` over the outcome distribution; the two must agree.
pub fn covariance_inequality(
    a: &ComplexMatrix,
    basis: &SpectralBasis,
    psi: &PureState,
) -> Result<InequalityReport> {
    let b = basis.source();
    let profile = weak_value_profile(a, basis, psi)?;
    let m = moments(a, b, psi)?;
    let re = optimal_proxy(&profile);
    let f_opt = operator_function(basis, &re)?;
    let lhs = seminorm(&f_opt.shift(m.mean_a), psi)? * m.var_b.sqrt();
    let rhs = m.cov.abs();

    let weights = profile.weights();
    let re_vals = re.real_values()?;
    let mean_re: f64 = re_vals.iter().zip(&weights).map(|(x, p)| x * p).sum();
    let mean_b: f64 = basis.eigenvalues().iter().zip(&weights).map(|(x, p)| x * p).sum();
    let classical_cov: f64 = re_vals
        .iter()
        .zip(basis.eigenvalues())
        .zip(&weights)
        .map(|((x, y), p)| (x - mean_re) * (y - mean_b) * p)
        .sum();
    let residual = (classical_cov.abs() - rhs).abs();
    let scale = 1.0 + seminorm(a, psi)? * seminorm(b, psi)?;
    if residual > 1e-10 * scale {
        return Err(Error::InternalConsistency(format!(
            "covariance bound {rhs:e} differs from classical covariance {classical_cov:e}"
        )));
    }
    Ok(InequalityReport::new("covariance", lhs, rhs)
        .note("classical_cov", classical_cov)
        .note("classical_cov_residual", residual))
}

/// `Var[A]·Var[B] ≥ |½⟨[A,B]⟩|² + |½⟨{A,B}⟩ − ⟨A⟩⟨B⟩|²`
pub fn schroedinger_inequality(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    psi: &PureState,
) -> Result<InequalityReport> {
    let m = moments(a, b, psi)?;
    let lhs = m.var_a * m.var_b;
    let rhs = m.commutator_half.norm_sqr() + m.cov * m.cov;
    Ok(InequalityReport::new("schroedinger", lhs, rhs))
}

/// Least-squares coefficients of the three equality conditions
/// `Im A_w(B)|ψ⟩ = λ(B − ⟨B⟩)|ψ⟩`, `(Re A_w(B) − ⟨A⟩)|ψ⟩ = μ(B − ⟨B⟩)|ψ⟩`
/// and `(A − ⟨A⟩)|ψ⟩ = β(B − ⟨B⟩)|ψ⟩` with `β = μ + iλ`, and the norms of
/// what is left over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualityDiagnostics {
    pub lambda: f64,
    pub mu: f64,
    pub beta: C64,
    pub residual_im: f64,
    pub residual_re: f64,
    pub residual_beta: f64,
}

pub fn equality_diagnostics(
    a: &ComplexMatrix,
    basis: &SpectralBasis,
    psi: &PureState,
) -> Result<EqualityDiagnostics> {
    let b = basis.source();
    let profile = weak_value_profile(a, basis, psi)?;
    let m = moments(a, b, psi)?;
    if !(m.var_b > VARIANCE_FLOOR) {
        return Err(Error::DegenerateVariance { variance: m.var_b });
    }
    let weights = profile.weights();
    let lambda = basis
        .eigenvalues()
        .iter()
        .zip(profile.values())
        .zip(&weights)
        .map(|((bi, aw), p)| (bi - m.mean_b) * aw.im * p)
        .sum::<f64>()
        / m.var_b;
    let mu = m.cov / m.var_b;
    let beta = C64::new(mu, lambda);

    let amp = psi.amplitudes();
    let centered_b = b.shift(m.mean_b).apply(amp)?;
    let aw = profile.as_function();
    let im_psi = operator_function(basis, &aw.im())?.apply(amp)?;
    let re_psi = operator_function(basis, &aw.re())?.shift(m.mean_a).apply(amp)?;
    let centered_a = a.shift(m.mean_a).apply(amp)?;

    let residual = |lhs: &[C64], coeff: C64| -> f64 {
        let r: Vec<C64> = lhs.iter().zip(&centered_b).map(|(x, y)| x - coeff * y).collect();
        norm2(&r)
    };
    Ok(EqualityDiagnostics {
        lambda,
        mu,
        beta,
        residual_im: residual(&im_psi, C64::new(lambda, 0.0)),
        residual_re: residual(&re_psi, C64::new(mu, 0.0)),
        residual_beta: residual(&centered_a, beta),
    })
}
