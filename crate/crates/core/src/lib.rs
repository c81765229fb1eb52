//! Uncertainty relations for approximating one observable by functions of
//! another, built on weak values.
//!
//! Given observables `A`, `B` and a pure state `|ψ⟩`, the crate computes the
//! weak-value profile of `A` on the eigenbasis of `B`, the optimal proxy
//! `Re A_w(B)`, both sides of the Robertson-Kennard, tightened, covariance and
//! Schrödinger inequalities, and the Fisher information and Cramér-Rao bound
//! for estimating the parameter of `e^{−itA/ħ}|ψ⟩` from `B` measurements.
//!
//! ```
//! use wvu_core::{linops::ComplexMatrix, quantum::PureState, weakval, inequalities};
//!
//! let sx = ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
//! let sz = ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).unwrap();
//! let psi = PureState::bloch(std::f64::consts::FRAC_PI_3, std::f64::consts::FRAC_PI_4);
//! let basis = weakval::spectral_basis(&sz, weakval::DEFAULT_DEGENERACY_TOL).unwrap();
//! let report = inequalities::optimal_inequality(&sx, &basis, &psi).unwrap();
//! assert!(report.saturated);
//! ```

pub mod error;
pub mod estimation;
pub mod inequalities;
pub mod linops;
pub mod problem;
pub mod quantum;
pub mod random;
pub mod weakval;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
