use std::f64::consts::PI;

use wvu_cli::estimate::cmd_estimate;
use wvu_cli::output::to_json;
use wvu_cli::report::cmd_report_default;
use wvu_cli::sweep::{cmd_qubit_sweep, rows_to_csv, QubitSweepConfig, SweepRow, CSV_HEADER};
use wvu_cli::verify::{cmd_random_verify, RandomVerifyConfig};
use wvu_cli::ExitStatus;
use wvu_core::problem::{parse_problem, ProblemFile};

fn problem(name: &str) -> ProblemFile {
    let path = format!("{}/../../problems/{name}.json", env!("CARGO_MANIFEST_DIR"));
    parse_problem(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn reference_qubit_report() {
    let doc = cmd_report_default(&problem("reference_qubit")).unwrap();
    assert_eq!(doc.exit_status, ExitStatus::Success);
    assert!(doc.violations.is_empty());
    for name in ["robertson_kennard", "schroedinger", "general_optimal", "optimal", "cramer_rao", "time_energy"] {
        let r = doc.inequality(name).unwrap_or_else(|| panic!("{name} missing"));
        assert!(r.saturated, "{name}: {r:?}");
    }
    let rk = doc.inequality("robertson_kennard").unwrap();
    assert!((rk.lhs - 1.0).abs() < 1e-14 && (rk.rhs - 1.0).abs() < 1e-14);
    let f = doc.fisher_at_t0.value().unwrap();
    assert!((f.fisher - 4.0).abs() < 1e-12);
    let est = doc.estimation.value().unwrap();
    assert!((est.fisher.cr_bound - 0.25).abs() < 1e-14);
    assert!((est.fisher.estimator[0] + 0.5).abs() < 1e-14 && (est.fisher.estimator[1] - 0.5).abs() < 1e-14);
}

#[test]
fn pi_third_quarter_report_matches_frozen_values() {
    // independent numpy evaluation at θ = π/3, φ = π/4
    let doc = cmd_report_default(&problem("eq_pi3_pi4")).unwrap();
    let rk = doc.inequality("robertson_kennard").unwrap();
    assert!((rk.lhs - 0.68465319688145765).abs() < 1e-14);
    assert!((rk.rhs - 0.61237243569579447).abs() < 1e-14);
    let opt = doc.inequality("optimal").unwrap();
    assert!((opt.lhs - 0.61237243569579447).abs() < 1e-14);
    assert!(opt.saturated);
    let sch = doc.inequality("schroedinger").unwrap();
    assert!((sch.lhs - 0.46875).abs() < 1e-14 && (sch.rhs - 0.46875).abs() < 1e-14);
    let d = doc.diagnostics.value().unwrap();
    assert!((d.mu + 0.40824829046386318).abs() < 1e-14);
    assert!((d.lambda - 0.81649658092772592).abs() < 1e-14);
}

#[test]
fn a_equal_b_has_exact_classical_proxy() {
    let doc = cmd_report_default(&problem("a_equals_b")).unwrap();
    assert_eq!(doc.exit_status, ExitStatus::Success);
    let approx = doc.approximation.value().unwrap();
    assert_eq!(approx.optimal_error, 0.0);
    assert_eq!(approx.optimal_commutant.error_kind(), Some("NoQuantumComponent"));
    assert_eq!(doc.fisher_at_t0.value().unwrap().fisher, 0.0);
    let cr = doc.inequalities.iter().find(|n| n.name == "cramer_rao").unwrap();
    assert_eq!(cr.entry.error_kind(), Some("VanishingFisher"));
    assert_eq!(doc.estimation.error_kind(), Some("VanishingFisher"));
}

#[test]
fn random_d6_report_holds_everywhere() {
    let doc = cmd_report_default(&problem("random_d6")).unwrap();
    assert_eq!(doc.exit_status, ExitStatus::Success, "{:?}", doc.violations);
    assert!(doc.identities.value().unwrap().max_residual() < 1e-9);
    assert!(doc.inequality("general_optimal").unwrap().saturated);
    assert!(doc.inequality("cramer_rao").unwrap().saturated);
    assert!(doc.inequality("time_energy").unwrap().saturated);
}

#[test]
fn report_is_invariant_under_rescaled_hbar_and_a() {
    // scaling A and ħ together leaves I·ħ² and the time estimator unchanged
    let base = problem("random_d6");
    let mut scaled = base.clone();
    scaled.a = base.a.scale_real(3.0);
    scaled.hbar = 3.0 * base.hbar;
    let r0 = cmd_report_default(&base).unwrap();
    let r1 = cmd_report_default(&scaled).unwrap();
    let (e0, e1) = (r0.estimation.value().unwrap(), r1.estimation.value().unwrap());
    for (x, y) in e0.fisher.estimator.iter().zip(&e1.fisher.estimator) {
        assert!((x - y).abs() < 1e-9 * (1.0 + x.abs()));
    }
    assert!((e0.fisher.fisher - e1.fisher.fisher).abs() < 1e-9 * e0.fisher.fisher);
    let (o0, o1) = (r0.inequality("optimal").unwrap(), r1.inequality("optimal").unwrap());
    assert!((3.0 * o0.lhs - o1.lhs).abs() < 1e-12 * (1.0 + o1.lhs));
}

#[test]
fn sweep_rows_and_csv_round_trip() {
    let rows = cmd_qubit_sweep(&QubitSweepConfig::new(25, 25, true).unwrap()).unwrap();
    assert_eq!(rows.len(), 625);
    let csv = rows_to_csv(&rows);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let parsed: Vec<SweepRow> = lines.map(|l| SweepRow::parse_csv_line(l).unwrap()).collect();
    assert_eq!(parsed, rows);

    // φ = π/2 lies on the grid at k = 6; there the real deviation vanishes and nothing is gained
    let at = |j: usize, k: usize| &rows[j * 25 + k];
    let r = at(8, 6);
    assert!((r.phi - PI / 2.0).abs() < 1e-15);
    assert!(!r.values.unwrap().tighter);
    assert!(at(8, 0).values.unwrap().tighter);
}

#[test]
fn random_verify_is_byte_identical() {
    let cfg = RandomVerifyConfig::new(vec![2, 4], 20, 99).unwrap();
    let a = to_json(&cmd_random_verify(&cfg).unwrap());
    let b = to_json(&cmd_random_verify(&cfg).unwrap());
    assert_eq!(a, b);
    let other = to_json(&cmd_random_verify(&RandomVerifyConfig::new(vec![2, 4], 20, 100).unwrap()).unwrap());
    assert_ne!(a, other);
}

#[test]
fn estimate_examples() {
    let doc = cmd_estimate(&problem("reference_qubit"), 100_000, 3).unwrap();
    assert!(doc.variance_relative_error.abs() < 0.03);
    assert!(doc.mean_deviation_sigmas < 5.0);
    assert!(!doc.insufficient_samples);

    let one = cmd_estimate(&problem("reference_qubit"), 1, 3).unwrap();
    assert!(one.insufficient_samples);
    assert_eq!(one.monte_carlo.empirical_variance, 0.0);

    let h2 = cmd_estimate(&problem("hbar2"), 1000, 3).unwrap();
    assert!((h2.fisher.fisher - 1.0).abs() < 1e-12);
    assert!((h2.fisher.cr_bound - 1.0).abs() < 1e-12);

    let err = cmd_estimate(&problem("a_equals_b"), 100, 3).unwrap_err();
    assert!(err.is_degenerate_input());
}
