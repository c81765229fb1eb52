//! `report`: every inequality, identity and estimation quantity for one problem.

use serde::Serialize;

use wvu_core::estimation::{
    cramer_rao_report, evolve, fisher_information, fisher_report, local_unbiasedness_check,
    optimal_estimator, time_energy_report, EstimationSetup, FisherInfo, FisherReport,
    UnbiasednessCheck,
};
use wvu_core::inequalities::{
    covariance_inequality, equality_diagnostics, general_inequality, optimal_inequality,
    rk_inequality, schroedinger_inequality, EqualityDiagnostics, InequalityReport,
    DEFAULT_HOLD_TOL,
};
use wvu_core::linops::ComplexMatrix;
use wvu_core::problem::ProblemFile;
use wvu_core::quantum::{moments, MomentReport, PhysicsConfig, PureState};
use wvu_core::weakval::{
    approximation_error, optimal_commutant, optimal_proxy, spectral_basis, verify_weak_identities,
    weak_value_profile, IdentityReport, SpectralBasis, SpectrumFunction, DEFAULT_DEGENERACY_TOL,
};
use wvu_core::{Error, Result};

use crate::output::fmt_f64;
use crate::{Entry, ExitStatus};

#[derive(Debug, Clone, Serialize)]
pub struct SpectralInfo {
    pub eigenvalues: Vec<f64>,
    pub reconstruction_residual: f64,
    pub outcome_probabilities: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApproximationInfo {
    /// `[re, im]` of `A_w(b_i)` in ascending eigenvalue order.
    pub weak_values: Vec<[f64; 2]>,
    pub optimal_proxy: Vec<f64>,
    /// `‖A − Re A_w(B)‖`
    pub optimal_error: f64,
    /// `‖A − ⟨A⟩‖`
    pub standard_deviation: f64,
    pub optimal_commutant: Entry<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedInequality {
    pub name: String,
    #[serde(flatten)]
    pub entry: Entry<InequalityReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimationSection {
    pub fisher: FisherReport,
    pub unbiasedness: UnbiasednessCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub dim: usize,
    pub hbar: f64,
    pub t0: f64,
    pub hold_tolerance: f64,
    pub moments: MomentReport,
    pub spectral: Entry<SpectralInfo>,
    pub approximation: Entry<ApproximationInfo>,
    pub identities: Entry<IdentityReport>,
    pub inequalities: Vec<NamedInequality>,
    pub diagnostics: Entry<EqualityDiagnostics>,
    pub fisher_at_t0: Entry<FisherInfo>,
    pub estimation: Entry<EstimationSection>,
    /// Names of inequalities whose slack fell below `−tol·(1 + lhs)`.
    pub violations: Vec<String>,
    pub exit_status: ExitStatus,
}

impl ReportDocument {
    pub fn inequality(&self, name: &str) -> Option<&InequalityReport> {
        self.inequalities.iter().find(|n| n.name == name).and_then(|n| n.entry.value())
    }

    /// Flat `name,lhs,rhs,slack,saturated` table of the evaluated inequalities.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,status,lhs,rhs,slack,saturated\n");
        for n in &self.inequalities {
            match &n.entry {
                Entry::Value(r) => out.push_str(&format!(
                    "{},ok,{},{},{},{}\n",
                    n.name,
                    fmt_f64(r.lhs),
                    fmt_f64(r.rhs),
                    fmt_f64(r.slack),
                    r.saturated
                )),
                Entry::Error { kind, .. } => out.push_str(&format!("{},{kind},,,,\n", n.name)),
            }
        }
        out
    }
}

fn named(name: &str, r: Result<InequalityReport>) -> NamedInequality {
    NamedInequality { name: name.to_string(), entry: r.into() }
}

pub fn cmd_report(problem: &ProblemFile, tol: f64) -> Result<ReportDocument> {
    let (a, b, psi) = (&problem.a, &problem.b, &problem.psi);
    let moments = moments(a, b, psi)?;
    let basis = spectral_basis(b, DEFAULT_DEGENERACY_TOL);

    let mut degenerate = false;
    let mut inequalities = vec![named("robertson_kennard", rk_inequality(a, b, psi))];
    inequalities.push(named("schroedinger", schroedinger_inequality(a, b, psi)));

    let setup = EstimationSetup::new(a.clone(), psi.clone(), problem.t0, PhysicsConfig::new(problem.hbar)?)?;

    let (spectral, approximation, identities, diagnostics, fisher_at_t0, estimation) = match &basis {
        Err(e) => {
            degenerate = e.is_degenerate_input();
            let entry = |name: &str| named(name, Err(e.clone()));
            for name in ["general_optimal", "optimal", "covariance", "cramer_rao", "time_energy"] {
                inequalities.push(entry(name));
            }
            (
                Err(e.clone()).into(),
                Err(e.clone()).into(),
                Err(e.clone()).into(),
                Err(e.clone()).into(),
                Err(e.clone()).into(),
                Err(e.clone()).into(),
            )
        }
        Ok(basis) => {
            let spectral = SpectralInfo {
                eigenvalues: basis.eigenvalues().to_vec(),
                reconstruction_residual: basis.reconstruction_residual(),
                outcome_probabilities: basis.weights(psi)?,
            };
            let approximation = approximation_info(a, basis, psi);
            if let Err(e) = &approximation {
                degenerate |= e.is_degenerate_input();
            }
            let comparison = SpectrumFunction::constant(basis.dim(), moments.mean_a);
            let identities = verify_weak_identities(a, basis, psi, &comparison);

            inequalities.push(named("general_optimal", general_at_optimum(a, basis, psi)));
            inequalities.push(named("optimal", optimal_inequality(a, basis, psi)));
            inequalities.push(named("covariance", covariance_inequality(a, basis, psi)));
            let (cr, te, est) = estimation_entries(&setup, basis);
            inequalities.push(named("cramer_rao", cr));
            inequalities.push(named("time_energy", te));

            (
                Entry::Value(spectral),
                approximation.into(),
                identities.into(),
                equality_diagnostics(a, basis, psi).into(),
                fisher_information(&setup, basis, problem.t0).into(),
                est.into(),
            )
        }
    };

    let violations: Vec<String> = inequalities
        .iter()
        .filter_map(|n| n.entry.value().filter(|r| !r.holds(tol)).map(|_| n.name.clone()))
        .collect();
    let exit_status = if degenerate {
        ExitStatus::DegenerateInput
    } else if !violations.is_empty() {
        ExitStatus::PropertyViolation
    } else {
        ExitStatus::Success
    };

    Ok(ReportDocument {
        dim: problem.dim,
        hbar: problem.hbar,
        t0: problem.t0,
        hold_tolerance: tol,
        moments,
        spectral,
        approximation,
        identities,
        inequalities,
        diagnostics,
        fisher_at_t0,
        estimation,
        violations,
        exit_status,
    })
}

pub fn cmd_report_default(problem: &ProblemFile) -> Result<ReportDocument> {
    cmd_report(problem, DEFAULT_HOLD_TOL)
}

fn approximation_info(a: &ComplexMatrix, basis: &SpectralBasis, psi: &PureState) -> Result<ApproximationInfo> {
    let profile = weak_value_profile(a, basis, psi)?;
    let proxy = optimal_proxy(&profile);
    let mean = profile.weighted_mean().re;
    Ok(ApproximationInfo {
        weak_values: profile.values().iter().map(|z| [z.re, z.im]).collect(),
        optimal_error: approximation_error(a, &proxy, basis, psi)?,
        standard_deviation: approximation_error(a, &SpectrumFunction::constant(basis.dim(), mean), basis, psi)?,
        optimal_proxy: proxy.real_values()?,
        optimal_commutant: optimal_commutant(&profile, psi).and_then(|g| g.real_values()).into(),
    })
}

/// The general inequality at `f = Re A_w`, `g = Im A_w/‖Im A_w‖`, where it is an equality.
fn general_at_optimum(a: &ComplexMatrix, basis: &SpectralBasis, psi: &PureState) -> Result<InequalityReport> {
    let profile = weak_value_profile(a, basis, psi)?;
    let g = optimal_commutant(&profile, psi)?;
    general_inequality(a, basis, &optimal_proxy(&profile), &g, psi)
}

fn estimation_entries(
    setup: &EstimationSetup,
    basis: &SpectralBasis,
) -> (Result<InequalityReport>, Result<InequalityReport>, Result<EstimationSection>) {
    let g = match optimal_estimator(setup, basis) {
        Ok(g) => g,
        Err(e) => return (Err(e.clone()), Err(e.clone()), Err(e)),
    };
    let cr = cramer_rao_report(&g, setup, basis, setup.t0());
    let te = evolve(setup, setup.t0()).and_then(|psi_t0| {
        let profile = weak_value_profile(setup.generator(), basis, &psi_t0)?;
        time_energy_report(setup, basis, &optimal_proxy(&profile), &g)
    });
    let section = (|| -> std::result::Result<EstimationSection, Error> {
        Ok(EstimationSection {
            fisher: fisher_report(setup, basis)?,
            unbiasedness: local_unbiasedness_check(&g, setup, basis)?,
        })
    })();
    (cr, te, section)
}
