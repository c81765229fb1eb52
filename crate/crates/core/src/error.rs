use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:.3e})")]
    NonHermitianInput { max_asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    ConvergenceFailure { sweeps: usize, off_norm: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("degenerate spectrum: eigenvalues {index} and {} differ by {gap:.3e}", index + 1)]
    DegenerateSpectrum { index: usize, gap: f64 },

    #[error("state has vanishing overlap with eigenvector {index} (|<b|psi>|^2 = {weight:.3e})")]
    ZeroOverlap { index: usize, weight: f64 },

    #[error("imaginary part of the weak value vanishes on the state (norm {norm:.3e})")]
    NoQuantumComponent { norm: f64 },

    #[error("spectrum function is not real (max imaginary part {max_imag:.3e})")]
    NonRealFunction { max_imag: f64 },

    #[error("variance of B is too small for equality diagnostics ({variance:.3e})")]
    DegenerateVariance { variance: f64 },

    #[error("Fisher information {fisher:.3e} is below the floor {floor:.3e}")]
    VanishingFisher { fisher: f64, floor: f64 },

    #[error("estimator is not locally unbiased (mean {mean_residual:.3e}, slope {slope_residual:.3e}, conjugacy {conjugacy_residual:.3e})")]
    NotLocallyUnbiased {
        mean_residual: f64,
        slope_residual: f64,
        conjugacy_residual: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency violated: {0}")]
    InternalConsistency(String),
}

impl Error {
    /// Stable name used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::ConvergenceFailure { .. } => "ConvergenceFailure",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::DegenerateSpectrum { .. } => "DegenerateSpectrum",
            Error::ZeroOverlap { .. } => "ZeroOverlap",
            Error::NoQuantumComponent { .. } => "NoQuantumComponent",
            Error::NonRealFunction { .. } => "NonRealFunction",
            Error::DegenerateVariance { .. } => "DegenerateVariance",
            Error::VanishingFisher { .. } => "VanishingFisher",
            Error::NotLocallyUnbiased { .. } => "NotLocallyUnbiased",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::InternalConsistency(_) => "InternalConsistency",
        }
    }

    /// Inputs that violate the standing assumptions of the weak-value framework.
    pub fn is_degenerate_input(&self) -> bool {
        matches!(
            self,
            Error::DegenerateSpectrum { .. } | Error::ZeroOverlap { .. } | Error::VanishingFisher { .. }
        )
    }
}
