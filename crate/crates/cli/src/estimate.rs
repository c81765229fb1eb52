//! `estimate`: Fisher information, the optimal estimator and a seeded Monte
//! Carlo check of its mean and variance.

use serde::Serialize;

use wvu_core::estimation::{
    cramer_rao_report, evolve, fisher_report, monte_carlo_estimate, optimal_estimator,
    time_energy_report, EstimationSetup, FisherReport, MonteCarloResult,
};
use wvu_core::inequalities::InequalityReport;
use wvu_core::problem::ProblemFile;
use wvu_core::quantum::PhysicsConfig;
use wvu_core::weakval::{optimal_proxy, spectral_basis, weak_value_profile, DEFAULT_DEGENERACY_TOL};
use wvu_core::Result;

use crate::{Entry, ExitStatus};

pub const DEFAULT_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Serialize)]
pub struct EstimateDocument {
    pub fisher: FisherReport,
    pub monte_carlo: MonteCarloResult,
    /// `|mean − t0|` in units of the Cramér-Rao standard error `√(1/(nI))`.
    pub mean_deviation_sigmas: f64,
    /// `empirical_variance·I − 1`
    pub variance_relative_error: f64,
    /// Set when `n < 2` and the sample variance carries no information.
    pub insufficient_samples: bool,
    pub cramer_rao: Entry<InequalityReport>,
    pub time_energy: Entry<InequalityReport>,
}

pub fn cmd_estimate(problem: &ProblemFile, n: usize, seed: u64) -> Result<EstimateDocument> {
    let setup = EstimationSetup::new(
        problem.a.clone(),
        problem.psi.clone(),
        problem.t0,
        PhysicsConfig::new(problem.hbar)?,
    )?;
    let basis = spectral_basis(&problem.b, DEFAULT_DEGENERACY_TOL)?;
    let fisher = fisher_report(&setup, &basis)?;
    let g = optimal_estimator(&setup, &basis)?;
    let monte_carlo = monte_carlo_estimate(&setup, &basis, &g, n, seed)?;

    let cramer_rao = cramer_rao_report(&g, &setup, &basis, problem.t0).into();
    let time_energy = evolve(&setup, problem.t0)
        .and_then(|psi| {
            let profile = weak_value_profile(&problem.a, &basis, &psi)?;
            time_energy_report(&setup, &basis, &optimal_proxy(&profile), &g)
        })
        .into();

    let se = (1.0 / (n as f64 * fisher.fisher)).sqrt();
    Ok(EstimateDocument {
        mean_deviation_sigmas: (monte_carlo.empirical_mean - problem.t0).abs() / se,
        variance_relative_error: monte_carlo.empirical_variance * fisher.fisher - 1.0,
        insufficient_samples: n < 2,
        fisher,
        monte_carlo,
        cramer_rao,
        time_energy,
    })
}

/// Exit status for a failed estimate: degenerate inputs map to 3, anything else to 1.
pub fn failure_status(e: &wvu_core::Error) -> ExitStatus {
    if e.is_degenerate_input() {
        ExitStatus::DegenerateInput
    } else {
        ExitStatus::InvalidInput
    }
}

impl EstimateDocument {
    pub fn to_csv(&self) -> String {
        use crate::output::fmt_f64;
        let mc = &self.monte_carlo;
        format!(
            "t0,fisher,cr_bound,n_samples,seed,empirical_mean,empirical_variance,standard_error_mean,insufficient_samples\n{},{},{},{},{},{},{},{},{}\n",
            fmt_f64(self.fisher.t0),
            fmt_f64(self.fisher.fisher),
            fmt_f64(self.fisher.cr_bound),
            mc.n_samples,
            mc.seed,
            fmt_f64(mc.empirical_mean),
            fmt_f64(mc.empirical_variance),
            fmt_f64(mc.standard_error_mean),
            self.insufficient_samples
        )
    }
}
