//! Pure states, expectation values, the state seminorm and second moments.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{check_dim, inner, norm2, ComplexMatrix};

pub const NORMALIZATION_TOL: f64 = 1e-8;
/// Variances in `[-VARIANCE_CLAMP, 0)` are round-off and reported as zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

/// A normalized state vector. Construction validates the norm and never rescales.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("state has non-finite amplitudes".into()));
        }
        let norm = norm2(&amplitudes);
        if (norm - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = norm2(&amplitudes);
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    /// `(cos(θ/2), e^{iφ} sin(θ/2))`
    pub fn bloch(theta: f64, phi: f64) -> Self {
        Self {
            amplitudes: vec![
                C64::new((theta / 2.0).cos(), 0.0),
                C64::from_polar((theta / 2.0).sin(), phi),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.amplitudes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsConfig {
    pub hbar: f64,
}

impl PhysicsConfig {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(Self { hbar })
    }
}

impl Default for PhysicsConfig {
    fn default() -> Self {
        Self { hbar: 1.0 }
    }
}

/// First and second moments of a pair of observables on one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean_a: f64,
    pub mean_b: f64,
    pub var_a: f64,
    pub var_b: f64,
    /// `½⟨{A,B}⟩ − ⟨A⟩⟨B⟩`
    pub cov: f64,
    /// `½⟨[A,B]⟩`, purely imaginary for Hermitian inputs.
    pub commutator_half: C64,
    /// `½⟨{A,B}⟩`
    pub anticommutator_half: f64,
}

/// `⟨ψ|X|ψ⟩`
pub fn expectation(x: &ComplexMatrix, psi: &PureState) -> Result<C64> {
    let xpsi = x.apply(psi.amplitudes())?;
    Ok(inner(psi.amplitudes(), &xpsi))
}

/// `‖X‖ = √⟨ψ|X†X|ψ⟩`, evaluated as the vector norm of `X|ψ⟩`.
pub fn seminorm(x: &ComplexMatrix, psi: &PureState) -> Result<f64> {
    Ok(norm2(&x.apply(psi.amplitudes())?))
}

/// Standard deviation `‖X − ⟨X⟩‖` of a Hermitian observable.
pub fn std_dev(x: &ComplexMatrix, psi: &PureState) -> Result<f64> {
    let mean = expectation(x, psi)?.re;
    seminorm(&x.shift(mean), psi)
}

pub fn clamp_variance(var: f64) -> Result<f64> {
    if var >= 0.0 {
        Ok(var)
    } else if var >= -VARIANCE_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::InternalConsistency(format!("negative variance {var:e}")))
    }
}

pub fn moments(a: &ComplexMatrix, b: &ComplexMatrix, psi: &PureState) -> Result<MomentReport> {
    check_dim(a.dim(), b.dim())?;
    check_dim(a.dim(), psi.dim())?;
    let mean_a = expectation(a, psi)?.re;
    let mean_b = expectation(b, psi)?.re;
    let var_a = clamp_variance(seminorm(&a.shift(mean_a), psi)?.powi(2))?;
    let var_b = clamp_variance(seminorm(&b.shift(mean_b), psi)?.powi(2))?;
    let commutator_half = expectation(&a.commutator(b)?, psi)? * 0.5;
    let anticommutator_half = (expectation(&a.anticommutator(b)?, psi)? * 0.5).re;
    Ok(MomentReport {
        mean_a,
        mean_b,
        var_a,
        var_b,
        cov: anticommutator_half - mean_a * mean_b,
        commutator_half,
        anticommutator_half,
    })
}
