//! JSON problem files.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "hbar": 1.0,
//!   "t0": 0.0,
//!   "A": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
//!   "B": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
//!   "psi": [[0.7071067811865476, 0], [0, 0.7071067811865476]]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major. `hbar`
//! defaults to 1 and `t0` to 0.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linops::{ComplexMatrix, DEFAULT_HERMITIAN_TOL};
use crate::quantum::{PureState, NORMALIZATION_TOL};

pub const MAX_DIM: usize = 256;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid {path}: {message}")]
    Validation { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> ProblemError {
    ProblemError::Validation { path: path.into(), message: message.into() }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemFile {
    pub dim: usize,
    pub hbar: f64,
    pub t0: f64,
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    pub psi: PureState,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t0: Option<f64>,
    #[serde(rename = "A")]
    a: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "B")]
    b: Vec<Vec<[f64; 2]>>,
    psi: Vec<[f64; 2]>,
}

pub fn parse_problem(bytes: &[u8]) -> Result<ProblemFile, ProblemError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ProblemError::Parse(e.to_string()))?;
    let raw: RawProblem = serde_json::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))?;
    validate(raw)
}

fn validate(raw: RawProblem) -> Result<ProblemFile, ProblemError> {
    let dim = raw.dim;
    if !(2..=MAX_DIM).contains(&dim) {
        return Err(invalid("dim", format!("must be between 2 and {MAX_DIM}, got {dim}")));
    }
    let hbar = raw.hbar.unwrap_or(1.0);
    if !(hbar.is_finite() && hbar > 0.0) {
        return Err(invalid("hbar", format!("must be positive and finite, got {hbar}")));
    }
    let t0 = raw.t0.unwrap_or(0.0);
    if !t0.is_finite() {
        return Err(invalid("t0", "must be finite"));
    }
    let a = matrix("A", dim, &raw.a)?;
    let b = matrix("B", dim, &raw.b)?;

    if raw.psi.len() != dim {
        return Err(invalid("psi", format!("expected {dim} amplitudes, got {}", raw.psi.len())));
    }
    let amps = entries("psi", &raw.psi)?;
    let psi = PureState::new(amps).map_err(|e| {
        invalid("psi", format!("{e} (tolerance {NORMALIZATION_TOL:e})"))
    })?;
    Ok(ProblemFile { dim, hbar, t0, a, b, psi })
}

fn entries(path: &str, raw: &[[f64; 2]]) -> Result<Vec<C64>, ProblemError> {
    raw.iter()
        .enumerate()
        .map(|(i, [re, im])| {
            if re.is_finite() && im.is_finite() {
                Ok(C64::new(*re, *im))
            } else {
                Err(invalid(format!("{path}[{i}]"), "non-finite entry"))
            }
        })
        .collect()
}

fn matrix(name: &str, dim: usize, raw: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix, ProblemError> {
    if raw.len() != dim {
        return Err(invalid(name, format!("expected {dim} rows, got {}", raw.len())));
    }
    let mut rows = Vec::with_capacity(dim);
    for (i, row) in raw.iter().enumerate() {
        let path = format!("{name}[{i}]");
        if row.len() != dim {
            return Err(invalid(path, format!("expected {dim} entries, got {}", row.len())));
        }
        rows.push(entries(&path, row)?);
    }
    let m = ComplexMatrix::from_rows(&rows).map_err(|e| invalid(name, e.to_string()))?;
    for i in 0..dim {
        for j in i..dim {
            let asym = (m[(i, j)] - m[(j, i)].conj()).norm();
            if asym > DEFAULT_HERMITIAN_TOL {
                return Err(invalid(
                    format!("{name}[{i}][{j}]"),
                    format!("matrix {name} is not Hermitian: |{name}[{i}][{j}] - conj({name}[{j}][{i}])| = {asym:e}"),
                ));
            }
        }
    }
    Ok(m)
}

impl ProblemFile {
    pub fn to_json(&self) -> String {
        let pair = |z: &C64| [z.re, z.im];
        let mat = |m: &ComplexMatrix| -> Vec<Vec<[f64; 2]>> {
            m.rows().iter().map(|r| r.iter().map(pair).collect()).collect()
        };
        let raw = RawProblem {
            dim: self.dim,
            hbar: Some(self.hbar),
            t0: Some(self.t0),
            a: mat(&self.a),
            b: mat(&self.b),
            psi: self.psi.amplitudes().iter().map(pair).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("problem serializes")
    }
}

/// Parses a comma-separated dimension list such as `2,4,8`.
pub fn parse_dims(text: &str) -> Result<Vec<usize>, ProblemError> {
    let dims = text
        .split(',')
        .map(|s| {
            let s = s.trim();
            let d: usize = s.parse().map_err(|_| invalid("dims", format!("not an integer: {s:?}")))?;
            if !(2..=MAX_DIM).contains(&d) {
                return Err(invalid("dims", format!("dimension {d} outside 2..={MAX_DIM}")));
            }
            Ok(d)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(dims)
}
