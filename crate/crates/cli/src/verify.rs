//! `random-verify`: every identity, inequality and estimation property over
//! seeded random instances, reduced to the worst violation per property.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use wvu_core::estimation::{
    fisher_information, fisher_report, time_energy_report, EstimationSetup,
};
use wvu_core::inequalities::{
    covariance_inequality, equality_diagnostics, general_inequality, optimal_inequality,
    rk_inequality, schroedinger_inequality, InequalityReport,
};
use wvu_core::linops::ComplexMatrix;
use wvu_core::quantum::{moments, PhysicsConfig, PureState};
use wvu_core::random::{random_hermitian, random_real_function, random_state};
use wvu_core::weakval::{
    approximation_error, optimal_proxy, spectral_basis, verify_weak_identities,
    weak_value_profile, SpectralBasis, DEFAULT_DEGENERACY_TOL,
};
use wvu_core::{Error, Result};

/// Perturbations of the optimal proxy tried per instance.
pub const PERTURBATIONS: usize = 100;
/// Fisher information below which the Cramér-Rao saturation checks are skipped.
pub const FISHER_CHECK_FLOOR: f64 = 1e-6;
/// Rejected draws tolerated per accepted instance before giving up.
const MAX_REJECTIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute residual of the exact weak-value identities.
    pub identity: f64,
    /// Relative negative slack accepted for each inequality.
    pub inequality: f64,
    /// `‖A − f_opt(B)‖ − ‖A − f(B)‖` accepted for perturbed `f`.
    pub optimality: f64,
    pub complementarity: f64,
    /// Relative gap between analytic and finite-difference Fisher information,
    /// absolute below [`FISHER_CHECK_FLOOR`].
    pub fisher: f64,
    /// Relative deviation of `Var[g_opt]·I` and the time-energy product from 1.
    pub cramer_rao: f64,
    /// Relative slack for the saturation expected of every qubit instance.
    pub qubit_saturation: f64,
    /// Eigendecomposition residuals relative to `1 + max|B|`.
    pub eigen: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-9,
            inequality: 1e-10,
            optimality: 1e-12,
            complementarity: 1e-9,
            fisher: 1e-5,
            cramer_rao: 1e-8,
            qubit_saturation: 1e-9,
            eigen: 1e-10,
        }
    }
}

impl Tolerances {
    /// Replaces the identity and complementarity tolerances, as set by `--tol`.
    pub fn with_identity_tol(mut self, tol: f64) -> Self {
        self.identity = tol;
        self.complementarity = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandomVerifyConfig {
    pub dims: Vec<usize>,
    pub trials_per_dim: usize,
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl RandomVerifyConfig {
    pub fn new(dims: Vec<usize>, trials_per_dim: usize, seed: u64) -> Result<Self> {
        if trials_per_dim == 0 {
            return Err(Error::InvalidParameter("trials per dimension must be at least 1".into()));
        }
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::InvalidParameter(format!("dimensions must be at least 2: {dims:?}")));
        }
        Ok(Self { dims, trials_per_dim, seed, tolerances: Tolerances::default() })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertySummary {
    pub name: String,
    pub max_violation: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct SaturationCounts {
    pub accepted: usize,
    pub optimal: usize,
    pub covariance: usize,
    pub schroedinger: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct DimCounts {
    pub dim: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub fisher_checks_skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub trials_per_dim: usize,
    pub tolerances: Tolerances,
    pub per_dim: Vec<DimCounts>,
    pub properties: Vec<PropertySummary>,
    /// Saturation of the tightened, covariance and Schrödinger inequalities at d = 2.
    pub qubit_saturation: Option<SaturationCounts>,
    pub all_passed: bool,
}

impl VerifySummary {
    pub fn property(&self, name: &str) -> Option<&PropertySummary> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("property,max_violation,tolerance,samples,passed\n");
        for p in &self.properties {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                p.name,
                crate::output::fmt_f64(p.max_violation),
                crate::output::fmt_f64(p.tolerance),
                p.samples,
                p.passed
            ));
        }
        out
    }
}

/// Worst observed value and number of observations per property.
#[derive(Debug, Default)]
struct Worst(BTreeMap<&'static str, (f64, usize)>);

impl Worst {
    fn record(&mut self, name: &'static str, value: f64) {
        let slot = self.0.entry(name).or_insert((0.0, 0));
        // NaN counts as the worst possible outcome
        slot.0 = if value.is_nan() || slot.0.is_nan() { f64::NAN } else { slot.0.max(value) };
        slot.1 += 1;
    }

    fn merge(mut self, other: Worst) -> Worst {
        for (name, (v, n)) in other.0 {
            let slot = self.0.entry(name).or_insert((0.0, 0));
            slot.0 = if v.is_nan() || slot.0.is_nan() { f64::NAN } else { slot.0.max(v) };
            slot.1 += n;
        }
        self
    }
}

struct Instance {
    a: ComplexMatrix,
    basis: SpectralBasis,
    psi: PureState,
    rejected: usize,
}

fn instance_rng(seed: u64, dim: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((dim as u64) << 32) | trial as u64);
    rng
}

fn draw_instance(rng: &mut ChaCha8Rng, dim: usize) -> Result<Instance> {
    for rejected in 0..MAX_REJECTIONS {
        let a = random_hermitian(rng, dim);
        let b = random_hermitian(rng, dim);
        let psi = random_state(rng, dim);
        let basis = match spectral_basis(&b, DEFAULT_DEGENERACY_TOL) {
            Ok(basis) => basis,
            Err(e) if e.is_degenerate_input() => continue,
            Err(e) => return Err(e),
        };
        match weak_value_profile(&a, &basis, &psi) {
            Ok(_) => return Ok(Instance { a, basis, psi, rejected }),
            Err(e) if e.is_degenerate_input() => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::InternalConsistency(format!("no acceptable instance in {MAX_REJECTIONS} draws at d = {dim}")))
}

struct Outcome {
    worst: Worst,
    rejected: usize,
    fisher_skipped: bool,
    saturation: Option<[bool; 3]>,
}

fn saturated_within(r: &InequalityReport, tol: f64) -> bool {
    r.slack.abs() <= tol * (1.0 + r.lhs.abs())
}

fn evaluate(config: &RandomVerifyConfig, dim: usize, trial: usize) -> Result<Outcome> {
    let tol = &config.tolerances;
    let mut rng = instance_rng(config.seed, dim, trial);
    let Instance { a, basis, psi, rejected } = draw_instance(&mut rng, dim)?;
    let b = basis.source();
    let mut w = Worst::default();

    let scale = 1.0 + b.max_abs();
    w.record("eigh.reconstruction", basis.reconstruction_residual() / scale);
    w.record("eigh.orthonormality", basis.eigen().orthonormality_residual());

    let f = random_real_function(&mut rng, dim);
    let ids = verify_weak_identities(&a, &basis, &psi, &f)?;
    for (name, value) in ids.named() {
        let key = match name {
            "action" => "identity.action",
            "mean_re" => "identity.mean_re",
            "mean_im" => "identity.mean_im",
            "norm_split" => "identity.norm_split",
            "pythagoras" => "identity.pythagoras",
            "orthogonality" => "identity.orthogonality",
            "correlation" => "identity.correlation",
            _ => "identity.distance",
        };
        w.record(key, value);
    }

    let g = random_real_function(&mut rng, dim);
    let general = general_inequality(&a, &basis, &f, &g, &psi)?;
    let rk = rk_inequality(&a, b, &psi)?;
    let opt = optimal_inequality(&a, &basis, &psi)?;
    let cov = covariance_inequality(&a, &basis, &psi)?;
    let sch = schroedinger_inequality(&a, b, &psi)?;
    w.record("inequality.general", general.violation());
    w.record("inequality.robertson_kennard", rk.violation());
    w.record("inequality.optimal", opt.violation());
    w.record("inequality.covariance", cov.violation());
    w.record("inequality.schroedinger", sch.violation());
    w.record("hierarchy.optimal_below_rk", (opt.lhs - rk.lhs).max(0.0));
    let m = moments(&a, b, &psi)?;
    w.record("complementarity", (opt.lhs.powi(2) + cov.lhs.powi(2) - m.var_a * m.var_b).abs());

    let diag = equality_diagnostics(&a, &basis, &psi)?;
    w.record("diagnostics.triangle", (diag.residual_beta - diag.residual_im - diag.residual_re).max(0.0));

    let profile = weak_value_profile(&a, &basis, &psi)?;
    let f_opt = optimal_proxy(&profile);
    let best = approximation_error(&a, &f_opt, &basis, &psi)?;
    for k in 0..PERTURBATIONS {
        let size = 10f64.powi(-((k % 4) as i32));
        let delta = random_real_function(&mut rng, dim);
        let perturbed = f_opt.combine(1.0, &delta, size)?;
        let err = approximation_error(&a, &perturbed, &basis, &psi)?;
        w.record("optimality.perturbation", (best - err).max(0.0));
    }

    let hbar = rng.random_range(0.5..2.0);
    let t0 = rng.random_range(-1.0..1.0);
    let setup = EstimationSetup::new(a.clone(), psi.clone(), t0, PhysicsConfig::new(hbar)?)?;
    let info = fisher_information(&setup, &basis, t0)?;
    let fisher_skipped = !(info.fisher > FISHER_CHECK_FLOOR);
    let fd_gap = (info.fisher - info.fisher_fd).abs();
    w.record("fisher.finite_difference", if fisher_skipped { fd_gap } else { fd_gap / info.fisher });
    if !fisher_skipped {
        let report = fisher_report(&setup, &basis)?;
        w.record("cramer_rao.saturation", (report.variance_g * report.fisher - 1.0).abs());
        let psi_t0 = wvu_core::estimation::evolve(&setup, t0)?;
        let p_t0 = weak_value_profile(&a, &basis, &psi_t0)?;
        let g_opt = wvu_core::weakval::SpectrumFunction::from_real(report.estimator.clone());
        let te = time_energy_report(&setup, &basis, &optimal_proxy(&p_t0), &g_opt)?;
        w.record("time_energy.saturation", (te.lhs / te.rhs - 1.0).abs());
    }

    let saturation = (dim == 2).then(|| {
        let s = tol.qubit_saturation;
        [saturated_within(&opt, s), saturated_within(&cov, s), saturated_within(&sch, s)]
    });

    Ok(Outcome { worst: w, rejected, fisher_skipped, saturation })
}

fn tolerance_for(name: &str, tol: &Tolerances) -> f64 {
    match name.split('.').next().unwrap_or(name) {
        "eigh" => tol.eigen,
        "identity" | "diagnostics" => tol.identity,
        "inequality" | "hierarchy" => tol.inequality,
        "complementarity" => tol.complementarity,
        "optimality" => tol.optimality,
        "fisher" => tol.fisher,
        _ => tol.cramer_rao,
    }
}

pub fn cmd_random_verify(config: &RandomVerifyConfig) -> Result<VerifySummary> {
    let jobs: Vec<(usize, usize)> = config
        .dims
        .iter()
        .flat_map(|&d| (0..config.trials_per_dim).map(move |t| (d, t)))
        .collect();
    let outcomes: Vec<(usize, Outcome)> = jobs
        .par_iter()
        .map(|&(d, t)| evaluate(config, d, t).map(|o| (d, o)))
        .collect::<Result<Vec<_>>>()?;

    let mut per_dim: Vec<DimCounts> = Vec::new();
    let mut sat = SaturationCounts::default();
    let mut has_qubits = false;
    let mut worst = Worst::default();
    for (d, o) in outcomes {
        let counts = match per_dim.iter_mut().find(|c| c.dim == d) {
            Some(c) => c,
            None => {
                per_dim.push(DimCounts { dim: d, ..Default::default() });
                per_dim.last_mut().expect("just pushed")
            }
        };
        counts.accepted += 1;
        counts.rejected += o.rejected;
        counts.fisher_checks_skipped += o.fisher_skipped as usize;
        if let Some([opt, cov, sch]) = o.saturation {
            has_qubits = true;
            sat.accepted += 1;
            sat.optimal += opt as usize;
            sat.covariance += cov as usize;
            sat.schroedinger += sch as usize;
        }
        worst = worst.merge(o.worst);
    }

    let mut properties: Vec<PropertySummary> = worst
        .0
        .into_iter()
        .map(|(name, (max_violation, samples))| {
            let tolerance = tolerance_for(name, &config.tolerances);
            PropertySummary {
                name: name.to_string(),
                max_violation,
                tolerance,
                samples,
                passed: max_violation <= tolerance,
            }
        })
        .collect();
    let qubit_saturation = has_qubits.then_some(sat);
    if let Some(s) = qubit_saturation {
        let misses = (s.accepted - s.optimal) + (s.accepted - s.covariance) + (s.accepted - s.schroedinger);
        properties.push(PropertySummary {
            name: "qubit.saturation_misses".into(),
            max_violation: misses as f64,
            tolerance: 0.0,
            samples: s.accepted,
            passed: misses == 0,
        });
    }
    let all_passed = properties.iter().all(|p| p.passed);
    Ok(VerifySummary {
        seed: config.seed,
        trials_per_dim: config.trials_per_dim,
        tolerances: config.tolerances,
        per_dim,
        properties,
        qubit_saturation,
        all_passed,
    })
}
