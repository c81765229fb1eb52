//! Weak values and spectral functions of an observable.
//!
//! Everything here lives on the eigenbasis `{|b_i⟩}` of a non-degenerate
//! observable `B`. For a state `|ψ⟩` with `⟨b_i|ψ⟩ ≠ 0` the weak value
//! `A_w(b_i) = ⟨b_i|A|ψ⟩ / ⟨b_i|ψ⟩` defines the normal operator `A_w(B)`
//! with `A|ψ⟩ = A_w(B)|ψ⟩`. Its real part is the best approximation of `A`
//! by a real function of `B`; its imaginary part carries the error.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linops::{check_dim, eigh, inner, norm2, ComplexMatrix, EigenSystem};
use crate::quantum::{expectation, seminorm, PureState};

/// Minimum eigenvalue gap, relative to the spectral range.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-8;
/// Minimum `|⟨b|ψ⟩|²`.
pub const DEFAULT_OVERLAP_TOL: f64 = 1e-12;
/// `‖Im A_w(B)‖` at or below this counts as no quantum component.
pub const QUANTUM_COMPONENT_FLOOR: f64 = 1e-10;
pub const REALITY_TOL: f64 = 1e-12;

/// Eigenbasis of a non-degenerate Hermitian observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    eigen: EigenSystem,
    source: ComplexMatrix,
}

impl SpectralBasis {
    pub fn dim(&self) -> usize {
        self.eigen.dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigen.eigenvalues
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eigen
    }

    /// The observable the basis was computed from.
    pub fn source(&self) -> &ComplexMatrix {
        &self.source
    }

    /// `⟨b_i|ψ⟩` for every eigenvector.
    pub fn overlaps(&self, psi: &PureState) -> Result<Vec<C64>> {
        check_dim(self.dim(), psi.dim())?;
        Ok((0..self.dim()).map(|i| inner(&self.eigen.eigenvector(i), psi.amplitudes())).collect())
    }

    /// Outcome probabilities `|⟨b_i|ψ⟩|²`.
    pub fn weights(&self, psi: &PureState) -> Result<Vec<f64>> {
        Ok(self.overlaps(psi)?.iter().map(|o| o.norm_sqr()).collect())
    }

    /// The identity function `b ↦ b`.
    pub fn identity_function(&self) -> SpectrumFunction {
        SpectrumFunction::from_real(self.eigenvalues().to_vec())
    }

    /// Same basis with eigenvector `i` multiplied by `e^{i·phases[i]}`.
    pub fn rephased(&self, phases: &[f64]) -> Result<Self> {
        check_dim(self.dim(), phases.len())?;
        let mut eigen = self.eigen.clone();
        for (j, &p) in phases.iter().enumerate() {
            let u = C64::from_polar(1.0, p);
            for i in 0..self.dim() {
                eigen.eigenvectors[(i, j)] *= u;
            }
        }
        Ok(Self { eigen, source: self.source.clone() })
    }

    /// `max |Σ b_i |b_i⟩⟨b_i| − B|`
    pub fn reconstruction_residual(&self) -> f64 {
        self.eigen.reconstruction_residual(&self.source)
    }

    /// `Σ_i f_i |⟨b_i|ψ⟩|²`, the expectation of `f(B)`.
    pub fn spectral_mean(&self, f: &SpectrumFunction, psi: &PureState) -> Result<C64> {
        check_dim(self.dim(), f.len())?;
        let w = self.weights(psi)?;
        Ok(f.values().iter().zip(&w).map(|(v, p)| v * p).sum())
    }

    /// `‖f(B)‖ = √(Σ_i |f_i|² |⟨b_i|ψ⟩|²)` without forming the operator.
    pub fn spectral_seminorm(&self, f: &SpectrumFunction, psi: &PureState) -> Result<f64> {
        check_dim(self.dim(), f.len())?;
        let w = self.weights(psi)?;
        Ok(f.values().iter().zip(&w).map(|(v, p)| v.norm_sqr() * p).sum::<f64>().sqrt())
    }
}

/// Diagonalizes `b` and rejects spectra with adjacent gaps at or below
/// `degeneracy_tol` times the spectral range.
pub fn spectral_basis(b: &ComplexMatrix, degeneracy_tol: f64) -> Result<SpectralBasis> {
    let eigen = eigh(b)?;
    let ev = &eigen.eigenvalues;
    let range = ev.last().copied().unwrap_or(0.0) - ev.first().copied().unwrap_or(0.0);
    let threshold = degeneracy_tol * range;
    for (i, pair) in ev.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        if gap <= threshold {
            return Err(Error::DegenerateSpectrum { index: i, gap });
        }
    }
    Ok(SpectralBasis { eigen, source: b.clone() })
}

/// Values of a complex function on the spectrum of `B`, aligned with the
/// ascending eigenvalues. Real functions give self-adjoint `f(B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFunction {
    values: Vec<C64>,
    real: bool,
}

impl SpectrumFunction {
    pub fn from_complex(values: Vec<C64>) -> Self {
        let real = values.iter().all(|z| z.im.abs() <= REALITY_TOL);
        Self { values, real }
    }

    pub fn from_real(values: Vec<f64>) -> Self {
        Self { values: values.into_iter().map(|x| C64::new(x, 0.0)).collect(), real: true }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        Self::from_real(vec![c; dim])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Real values, or `NonRealFunction` if any imaginary part exceeds the tolerance.
    pub fn real_values(&self) -> Result<Vec<f64>> {
        if !self.real {
            let max_imag = self.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
            return Err(Error::NonRealFunction { max_imag });
        }
        Ok(self.values.iter().map(|z| z.re).collect())
    }

    pub fn re(&self) -> Self {
        Self::from_real(self.values.iter().map(|z| z.re).collect())
    }

    pub fn im(&self) -> Self {
        Self::from_real(self.values.iter().map(|z| z.im).collect())
    }

    pub fn map_real(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(Self::from_real(self.real_values()?.into_iter().map(f).collect()))
    }

    /// Pointwise `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_dim(self.len(), other.len())?;
        Ok(Self::from_complex(
            self.values.iter().zip(&other.values).map(|(x, y)| x * a + y * b).collect(),
        ))
    }
}

/// `A_w(b_i)` for one fixed state, together with the overlaps `⟨b_i|ψ⟩`.
#[derive(Debug, Clone)]
pub struct WeakValueProfile<'a> {
    basis: &'a SpectralBasis,
    state: &'a PureState,
    values: Vec<C64>,
    overlaps: Vec<C64>,
}

impl<'a> WeakValueProfile<'a> {
    pub fn basis(&self) -> &'a SpectralBasis {
        self.basis
    }

    pub fn state(&self) -> &'a PureState {
        self.state
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn overlaps(&self) -> &[C64] {
        &self.overlaps
    }

    pub fn weights(&self) -> Vec<f64> {
        self.overlaps.iter().map(|o| o.norm_sqr()).collect()
    }

    pub fn as_function(&self) -> SpectrumFunction {
        SpectrumFunction::from_complex(self.values.clone())
    }

    /// `Σ_i |⟨b_i|ψ⟩|² A_w(b_i)`; equals `⟨A⟩` with vanishing imaginary part.
    pub fn weighted_mean(&self) -> C64 {
        self.values.iter().zip(&self.overlaps).map(|(v, o)| v * o.norm_sqr()).sum()
    }

    /// `‖Im A_w(B)‖` on the recorded state.
    pub fn im_norm(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.overlaps)
            .map(|(v, o)| v.im * v.im * o.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn weak_value_profile<'a>(
    a: &ComplexMatrix,
    basis: &'a SpectralBasis,
    psi: &'a PureState,
) -> Result<WeakValueProfile<'a>> {
    weak_value_profile_with_tol(a, basis, psi, DEFAULT_OVERLAP_TOL)
}

pub fn weak_value_profile_with_tol<'a>(
    a: &ComplexMatrix,
    basis: &'a SpectralBasis,
    psi: &'a PureState,
    overlap_tol: f64,
) -> Result<WeakValueProfile<'a>> {
    check_dim(basis.dim(), a.dim())?;
    let overlaps = basis.overlaps(psi)?;
    if let Some((index, o)) =
        overlaps.iter().enumerate().find(|(_, o)| !(o.norm_sqr() >= overlap_tol))
    {
        return Err(Error::ZeroOverlap { index, weight: o.norm_sqr() });
    }
    let apsi = a.apply(psi.amplitudes())?;
    let values = overlaps
        .iter()
        .enumerate()
        .map(|(i, o)| inner(&basis.eigen.eigenvector(i), &apsi) / o)
        .collect();
    Ok(WeakValueProfile { basis, state: psi, values, overlaps })
}

/// `f(B) = Σ_i f(b_i) |b_i⟩⟨b_i|`
pub fn operator_function(basis: &SpectralBasis, f: &SpectrumFunction) -> Result<ComplexMatrix> {
    basis.eigen.compose(f.values())
}

/// `f_opt(b) = Re A_w(b)`
pub fn optimal_proxy(profile: &WeakValueProfile<'_>) -> SpectrumFunction {
    SpectrumFunction::from_real(profile.values.iter().map(|z| z.re).collect())
}

/// `ḡ_opt(b) = Im A_w(b) / ‖Im A_w(B)‖`, the unit-seminorm function of `B`
/// maximizing `½|⟨[A, ḡ(B)]⟩|`.
pub fn optimal_commutant(
    profile: &WeakValueProfile<'_>,
    psi: &PureState,
) -> Result<SpectrumFunction> {
    let im = profile.as_function().im();
    let norm = profile.basis.spectral_seminorm(&im, psi)?;
    if !(norm > QUANTUM_COMPONENT_FLOOR) {
        return Err(Error::NoQuantumComponent { norm });
    }
    im.map_real(|x| x / norm)
}

/// `‖A − f(B)‖` for a real proxy function `f`.
pub fn approximation_error(
    a: &ComplexMatrix,
    f: &SpectrumFunction,
    basis: &SpectralBasis,
    psi: &PureState,
) -> Result<f64> {
    f.real_values()?;
    check_dim(basis.dim(), f.len())?;
    let fb = operator_function(basis, f)?;
    check_dim(a.dim(), fb.dim())?;
    seminorm(&(a - &fb), psi)
}

/// Absolute residuals of the exact weak-value identities for one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `‖A|ψ⟩ − A_w(B)|ψ⟩‖₂`
    pub residual_action: f64,
    /// `|⟨A⟩ − ⟨Re A_w(B)⟩|`
    pub residual_mean_re: f64,
    /// `|⟨Im A_w(B)⟩|`
    pub residual_mean_im: f64,
    /// `|‖A‖² − ‖Re A_w(B)‖² − ‖Im A_w(B)‖²|`
    pub residual_norm_split: f64,
    /// `|‖A − f(B)‖² − ‖A − f_opt(B)‖² − ‖f_opt(B) − f(B)‖²|`
    pub residual_pythagoras: f64,
    /// `|Re⟨(A − f_opt(B))(f_opt(B) − f(B))⟩|`
    pub residual_orthogonality: f64,
    /// `|⟨f(B)A⟩ − ⟨f(B)A_w(B)⟩|`
    pub residual_correlation: f64,
    /// `|‖A − f_opt(B)‖ − ‖Im A_w(B)‖|`
    pub residual_distance: f64,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.named().iter().map(|(_, r)| *r).fold(0.0, f64::max)
    }

    pub fn named(&self) -> [(&'static str, f64); 8] {
        [
            ("action", self.residual_action),
            ("mean_re", self.residual_mean_re),
            ("mean_im", self.residual_mean_im),
            ("norm_split", self.residual_norm_split),
            ("pythagoras", self.residual_pythagoras),
            ("orthogonality", self.residual_orthogonality),
            ("correlation", self.residual_correlation),
            ("distance", self.residual_distance),
        ]
    }
}

/// Evaluates every identity with explicit operators, independently of the
/// spectral shortcuts used elsewhere. `f` is an arbitrary real comparison proxy.
pub fn verify_weak_identities(
    a: &ComplexMatrix,
    basis: &SpectralBasis,
    psi: &PureState,
    f: &SpectrumFunction,
) -> Result<IdentityReport> {
    f.real_values()?;
    let profile = weak_value_profile(a, basis, psi)?;
    let aw = profile.as_function();
    let aw_op = operator_function(basis, &aw)?;
    let re_op = operator_function(basis, &aw.re())?;
    let im_op = operator_function(basis, &aw.im())?;
    let f_op = operator_function(basis, f)?;
    let amp = psi.amplitudes();

    let apsi = a.apply(amp)?;
    let awpsi = aw_op.apply(amp)?;
    let diff: Vec<C64> = apsi.iter().zip(&awpsi).map(|(x, y)| x - y).collect();
    let residual_action = norm2(&diff);

    let mean_a = expectation(a, psi)?;
    let residual_mean_re = (mean_a - expectation(&re_op, psi)?).norm();
    let residual_mean_im = expectation(&im_op, psi)?.norm();

    let norm_a = seminorm(a, psi)?;
    let norm_re = seminorm(&re_op, psi)?;
    let norm_im = seminorm(&im_op, psi)?;
    let residual_norm_split = (norm_a.powi(2) - norm_re.powi(2) - norm_im.powi(2)).abs();

    let err_f = seminorm(&(a - &f_op), psi)?;
    let err_opt = seminorm(&(a - &re_op), psi)?;
    let gap = seminorm(&(&re_op - &f_op), psi)?;
    let residual_pythagoras = (err_f.powi(2) - err_opt.powi(2) - gap.powi(2)).abs();

    let cross = (a - &re_op).matmul(&(&re_op - &f_op))?;
    let residual_orthogonality = expectation(&cross, psi)?.re.abs();

    let residual_correlation = (expectation(&f_op.matmul(a)?, psi)?
        - expectation(&f_op.matmul(&aw_op)?, psi)?)
    .norm();

    let residual_distance = (err_opt - norm_im).abs();

    Ok(IdentityReport {
        residual_action,
        residual_mean_re,
        residual_mean_im,
        residual_norm_split,
        residual_pythagoras,
        residual_orthogonality,
        residual_correlation,
        residual_distance,
    })
}
