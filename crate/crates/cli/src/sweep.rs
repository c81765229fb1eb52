//! `qubit-sweep`: `A = σx`, `B = σz` over a grid of Bloch states, comparing
//! matrix computations with the closed forms `‖Re A_w(B) − ⟨A⟩‖ = |cos θ cos φ|`
//! and `σ(B) = |sin θ|`.

use std::f64::consts::PI;

use serde::Serialize;

use wvu_core::inequalities::{optimal_inequality, rk_inequality};
use wvu_core::linops::ComplexMatrix;
use wvu_core::quantum::{expectation, seminorm, std_dev, PureState};
use wvu_core::weakval::{
    operator_function, optimal_proxy, spectral_basis, weak_value_profile, SpectralBasis,
    DEFAULT_DEGENERACY_TOL,
};
use wvu_core::{Error, Result};

use crate::output::{fmt_f64, fmt_opt};

/// Absolute margin by which the tightened bound must undercut RK to count as tighter.
pub const TIGHTER_TOL: f64 = 1e-9;

pub const CSV_HEADER: &str = "theta,phi,status,re_dev,re_dev_formula,sigma_b,sigma_b_formula,rk_lhs,rk_rhs,opt_lhs,opt_rhs,tighter";
pub const CSV_COLUMNS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitSweepConfig {
    pub theta_steps: usize,
    pub phi_steps: usize,
    /// With endpoints: `θ_j = πj/(n−1)`, `φ_k = 2πk/(m−1)`. Without: cell midpoints.
    pub includes_endpoints: bool,
}

impl QubitSweepConfig {
    pub fn new(theta_steps: usize, phi_steps: usize, includes_endpoints: bool) -> Result<Self> {
        if theta_steps < 2 || phi_steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "sweep needs at least 2 steps per axis, got {theta_steps}x{phi_steps}"
            )));
        }
        Ok(Self { theta_steps, phi_steps, includes_endpoints })
    }

    fn axis(steps: usize, span: f64, endpoints: bool) -> Vec<f64> {
        (0..steps)
            .map(|j| {
                if endpoints {
                    span * j as f64 / (steps - 1) as f64
                } else {
                    span * (j as f64 + 0.5) / steps as f64
                }
            })
            .collect()
    }

    pub fn thetas(&self) -> Vec<f64> {
        Self::axis(self.theta_steps, PI, self.includes_endpoints)
    }

    pub fn phis(&self) -> Vec<f64> {
        Self::axis(self.phi_steps, 2.0 * PI, self.includes_endpoints)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// `⟨b|ψ⟩ = 0` for an eigenvector of `σz`, i.e. `θ ∈ {0, π}`.
    SkippedZeroOverlap,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::SkippedZeroOverlap => "skipped_zero_overlap",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(RowStatus::Ok),
            "skipped_zero_overlap" => Some(RowStatus::SkippedZeroOverlap),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepValues {
    pub re_dev: f64,
    pub re_dev_formula: f64,
    pub sigma_b: f64,
    pub sigma_b_formula: f64,
    pub rk_lhs: f64,
    pub rk_rhs: f64,
    pub opt_lhs: f64,
    pub opt_rhs: f64,
    pub tighter: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub status: RowStatus,
    pub values: Option<SweepValues>,
}

impl SweepRow {
    pub fn to_csv_line(&self) -> String {
        let v = self.values;
        let fields = [
            fmt_f64(self.theta),
            fmt_f64(self.phi),
            self.status.as_str().to_string(),
            fmt_opt(v.map(|v| v.re_dev)),
            fmt_opt(v.map(|v| v.re_dev_formula)),
            fmt_opt(v.map(|v| v.sigma_b)),
            fmt_opt(v.map(|v| v.sigma_b_formula)),
            fmt_opt(v.map(|v| v.rk_lhs)),
            fmt_opt(v.map(|v| v.rk_rhs)),
            fmt_opt(v.map(|v| v.opt_lhs)),
            fmt_opt(v.map(|v| v.opt_rhs)),
            v.map(|v| v.tighter.to_string()).unwrap_or_default(),
        ];
        fields.join(",")
    }

    /// Inverse of [`SweepRow::to_csv_line`].
    pub fn parse_csv_line(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.trim_end_matches(['\r', '\n']).split(',').collect();
        if fields.len() != CSV_COLUMNS {
            return Err(format!("expected {CSV_COLUMNS} columns, got {}", fields.len()));
        }
        let num = |i: usize| -> std::result::Result<f64, String> {
            fields[i].parse::<f64>().map_err(|e| format!("column {i}: {e}"))
        };
        let status = RowStatus::parse(fields[2]).ok_or_else(|| format!("unknown status {:?}", fields[2]))?;
        let values = match status {
            RowStatus::SkippedZeroOverlap => {
                if fields[3..].iter().any(|f| !f.is_empty()) {
                    return Err("skipped row carries values".into());
                }
                None
            }
            RowStatus::Ok => Some(SweepValues {
                re_dev: num(3)?,
                re_dev_formula: num(4)?,
                sigma_b: num(5)?,
                sigma_b_formula: num(6)?,
                rk_lhs: num(7)?,
                rk_rhs: num(8)?,
                opt_lhs: num(9)?,
                opt_rhs: num(10)?,
                tighter: fields[11].parse::<bool>().map_err(|e| format!("column 11: {e}"))?,
            }),
        };
        Ok(SweepRow { theta: num(0)?, phi: num(1)?, status, values })
    }
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).expect("2x2")
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, -1.0]]).expect("2x2")
}

fn row(a: &ComplexMatrix, basis: &SpectralBasis, theta: f64, phi: f64) -> Result<SweepRow> {
    let psi = PureState::bloch(theta, phi);
    let profile = match weak_value_profile(a, basis, &psi) {
        Ok(p) => p,
        Err(Error::ZeroOverlap { .. }) => {
            return Ok(SweepRow { theta, phi, status: RowStatus::SkippedZeroOverlap, values: None })
        }
        Err(e) => return Err(e),
    };
    let mean_a = expectation(a, &psi)?.re;
    let re_op = operator_function(basis, &optimal_proxy(&profile))?;
    let re_dev = seminorm(&re_op.shift(mean_a), &psi)?;
    let rk = rk_inequality(a, basis.source(), &psi)?;
    let opt = optimal_inequality(a, basis, &psi)?;
    Ok(SweepRow {
        theta,
        phi,
        status: RowStatus::Ok,
        values: Some(SweepValues {
            re_dev,
            re_dev_formula: (theta.cos() * phi.cos()).abs(),
            sigma_b: std_dev(basis.source(), &psi)?,
            sigma_b_formula: theta.sin().abs(),
            rk_lhs: rk.lhs,
            rk_rhs: rk.rhs,
            opt_lhs: opt.lhs,
            opt_rhs: opt.rhs,
            tighter: opt.lhs < rk.lhs - TIGHTER_TOL,
        }),
    })
}

/// Rows in θ-major order.
pub fn cmd_qubit_sweep(config: &QubitSweepConfig) -> Result<Vec<SweepRow>> {
    let a = sigma_x();
    let basis = spectral_basis(&sigma_z(), DEFAULT_DEGENERACY_TOL)?;
    let phis = config.phis();
    config
        .thetas()
        .into_iter()
        .flat_map(|t| phis.iter().map(move |&p| (t, p)))
        .map(|(t, p)| row(&a, &basis, t, p))
        .collect()
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 200);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.to_csv_line());
        out.push('\n');
    }
    out
}
