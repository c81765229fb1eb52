//! Random instances for property checks: Gaussian Hermitian matrices and
//! Haar-distributed pure states.

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linops::ComplexMatrix;
use crate::quantum::PureState;
use crate::weakval::SpectrumFunction;

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `(G + G†)/2` with i.i.d. standard complex Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = gaussian_complex(rng);
        }
    }
    let mut h = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            h[(i, j)] = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
        }
    }
    h
}

/// Normalized complex Gaussian vector.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> PureState {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian_complex(rng)).collect();
        if let Ok(psi) = PureState::normalized(v) {
            return psi;
        }
    }
}

pub fn random_real_function<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SpectrumFunction {
    SpectrumFunction::from_real((0..dim).map(|_| rng.sample(StandardNormal)).collect())
}
