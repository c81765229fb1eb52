//! Dense complex linear algebra: Hermitian eigendecomposition by cyclic
//! Jacobi rotations and exponentials of Hermitian generators.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_HERMITIAN_TOL: f64 = 1e-10;
pub const DEFAULT_RECONSTRUCTION_TOL: f64 = 1e-10;

/// Components below this modulus are skipped when fixing eigenvector phases.
const PHASE_FLOOR: f64 = 1e-8;
const MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, C64::new(1.0, 0.0))
    }

    pub fn scalar(dim: usize, value: C64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = value;
        }
        m
    }

    pub fn diagonal(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<C64>> =
            rows.iter().map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        self.data.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `self - c·I`
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out[(i, i)] -= c;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff on matrices of different size");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_dim(self.dim, v.len())?;
        Ok(self
            .data
            .chunks(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect())
    }

    /// `[self, other] = self·other − other·self`
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub fn anticommutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? + &other.matmul(self)?)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different size");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different size");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("multiplying matrices of different size")
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// `⟨u|v⟩`, conjugate-linear in the first argument.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianCheckReport {
    /// `max |M_ij − conj(M_ji)|`
    pub max_asymmetry: f64,
}

impl HermitianCheckReport {
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_asymmetry <= tol
    }
}

/// Measures how far `m` is from Hermitian. The tolerance is accepted for
/// symmetry with the other checks; callers decide with [`HermitianCheckReport::is_hermitian`].
pub fn check_hermitian(m: &ComplexMatrix, _tol: f64) -> HermitianCheckReport {
    let n = m.dim();
    let mut max_asymmetry: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            max_asymmetry = max_asymmetry.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    HermitianCheckReport { max_asymmetry }
}

/// Hermiticity test with the tolerance scaled by the magnitude of the entries.
pub(crate) fn ensure_hermitian(m: &ComplexMatrix, tol: f64) -> Result<()> {
    let report = check_hermitian(m, tol);
    if report.max_asymmetry.is_nan() || !report.is_hermitian(tol * (1.0 + m.max_abs())) {
        return Err(Error::NonHermitianInput { max_asymmetry: report.max_asymmetry });
    }
    Ok(())
}

/// Eigenpairs of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSystem {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `j` is the eigenvector for `eigenvalues[j]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> Vec<C64> {
        self.eigenvectors.column(j)
    }

    /// `V·diag(values)·V†` for an arbitrary complex function on the spectrum.
    pub fn compose(&self, values: &[C64]) -> Result<ComplexMatrix> {
        check_dim(self.dim(), values.len())?;
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::new(0.0, 0.0);
                for (k, w) in values.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// `max |M − V·diag(λ)·V†|`
    pub fn reconstruction_residual(&self, m: &ComplexMatrix) -> f64 {
        let values: Vec<C64> = self.eigenvalues.iter().map(|&x| C64::new(x, 0.0)).collect();
        match self.compose(&values) {
            Ok(rebuilt) if rebuilt.dim() == m.dim() => rebuilt.max_abs_diff(m),
            _ => f64::INFINITY,
        }
    }

    /// `max |V†V − I|`
    pub fn orthonormality_residual(&self) -> f64 {
        let v = &self.eigenvectors;
        (&v.adjoint() * v).max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }

    /// `max_j ‖M v_j − λ_j v_j‖₂`
    pub fn eigen_residual(&self, m: &ComplexMatrix) -> f64 {
        (0..self.dim())
            .map(|j| {
                let v = self.eigenvector(j);
                let mv = m.apply(&v).expect("eigenvector length equals matrix dimension");
                let r: Vec<C64> =
                    mv.iter().zip(&v).map(|(a, b)| a - b * self.eigenvalues[j]).collect();
                norm2(&r)
            })
            .fold(0.0, f64::max)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Eigenvalues come back ascending. Each eigenvector is rotated so that its
/// first component with modulus above `1e-8` is real and positive, which makes
/// the output a deterministic function of the input.
pub fn eigh(m: &ComplexMatrix) -> Result<EigenSystem> {
    ensure_hermitian(m, DEFAULT_HERMITIAN_TOL)?;
    if !m.is_finite() {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let n = m.dim();
    let mut a = m.clone();
    // symmetrize exactly so the rotations see a Hermitian matrix
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let total: f64 = a.as_slice().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = f64::EPSILON * total.max(f64::MIN_POSITIVE);

    let mut converged = n < 2;
    let mut off = off_diagonal_norm(&a);
    for _ in 0..MAX_SWEEPS {
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&a);
    }
    if !converged && off > threshold {
        return Err(Error::ConvergenceFailure { sweeps: MAX_SWEEPS, off_norm: off });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));

    let eigenvalues: Vec<f64> = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let mut vec = v.column(k);
        let norm = norm2(&vec);
        if let Some(pivot) = vec.iter().find(|z| z.norm() > PHASE_FLOOR) {
            let phase = pivot.conj() / pivot.norm();
            for z in vec.iter_mut() {
                *z *= phase;
            }
        }
        for (row, z) in vec.into_iter().enumerate() {
            eigenvectors[(row, col)] = z / norm;
        }
    }
    Ok(EigenSystem { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-iα})·R(θ)` acting on
/// the `(p, q)` plane, where `α = arg a[p][q]`. Updates `a ← G†aG`, `v ← vG`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.dim();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let gpp = C64::new(c, 0.0);
    let gpq = C64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}

/// `exp(−i·s·A)` built from an existing eigendecomposition of `A`.
pub fn exponential_from_eigen(eigen: &EigenSystem, s: f64) -> ComplexMatrix {
    let phases: Vec<C64> =
        eigen.eigenvalues.iter().map(|&l| C64::from_polar(1.0, -s * l)).collect();
    eigen.compose(&phases).expect("phase vector matches eigensystem dimension")
}

/// `exp(−i·s·A)` for Hermitian `A`.
pub fn generator_exponential(a: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    Ok(exponential_from_eigen(&eigh(a)?, s))
}
