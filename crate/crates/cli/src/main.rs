use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wvu_cli::estimate::{cmd_estimate, failure_status, DEFAULT_SAMPLES};
use wvu_cli::output::{emit, to_json};
use wvu_cli::report::cmd_report;
use wvu_cli::sweep::{cmd_qubit_sweep, rows_to_csv, QubitSweepConfig};
use wvu_cli::verify::{cmd_random_verify, RandomVerifyConfig};
use wvu_cli::ExitStatus;
use wvu_core::inequalities::DEFAULT_HOLD_TOL;
use wvu_core::problem::{parse_dims, parse_problem, ProblemFile};
use wvu_core::quantum::PhysicsConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "wvu", version, about = "Weak-value uncertainty relations: reports, sweeps and random checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct ProblemArgs {
    /// JSON problem file.
    problem: PathBuf,
    /// Overrides `t0` from the problem file.
    #[arg(long, allow_negative_numbers = true)]
    t0: Option<f64>,
    /// Overrides `hbar` from the problem file.
    #[arg(long)]
    hbar: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// All inequalities, identities and estimation quantities for one problem.
    Report {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Relative tolerance for an inequality to count as holding.
        #[arg(long, default_value_t = DEFAULT_HOLD_TOL)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// `A = σx`, `B = σz` over a grid of Bloch states.
    QubitSweep {
        #[arg(long, default_value_t = 25)]
        theta_steps: usize,
        #[arg(long, default_value_t = 25)]
        phi_steps: usize,
        /// Sample cell midpoints instead of including the grid endpoints.
        #[arg(long)]
        no_endpoints: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Checks every property on seeded random instances.
    RandomVerify {
        #[arg(long, default_value = "2,3,4,8,16")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the identity and complementarity tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fisher information, optimal estimator and a Monte Carlo check.
    Estimate {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn fail(status: ExitStatus, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("wvu: {message}");
    ExitCode::from(status.code() as u8)
}

fn load(args: &ProblemArgs) -> Result<ProblemFile, String> {
    let bytes = std::fs::read(&args.problem).map_err(|e| format!("{}: {e}", args.problem.display()))?;
    let mut problem = parse_problem(&bytes).map_err(|e| format!("{}: {e}", args.problem.display()))?;
    if let Some(t0) = args.t0 {
        if !t0.is_finite() {
            return Err(format!("t0 must be finite, got {t0}"));
        }
        problem.t0 = t0;
    }
    if let Some(hbar) = args.hbar {
        problem.hbar = PhysicsConfig::new(hbar).map_err(|e| e.to_string())?.hbar;
    }
    Ok(problem)
}

fn write(text: &str, path: Option<&Path>) -> Result<(), ExitCode> {
    emit(text, path).map_err(|e| fail(ExitStatus::InvalidInput, e))
}

fn run(cli: Cli) -> ExitCode {
    match cli.command {
        Command::Report { problem, tol, out } => {
            if !(tol >= 0.0) {
                return fail(ExitStatus::InvalidInput, format!("tolerance must be non-negative, got {tol}"));
            }
            let problem = match load(&problem) {
                Ok(p) => p,
                Err(e) => return fail(ExitStatus::InvalidInput, e),
            };
            let doc = match cmd_report(&problem, tol) {
                Ok(d) => d,
                Err(e) => return fail(failure_status(&e), e),
            };
            let text = match out.format {
                Format::Json => to_json(&doc),
                Format::Csv => doc.to_csv(),
            };
            if let Err(code) = write(&text, out.output.as_deref()) {
                return code;
            }
            ExitCode::from(doc.exit_status.code() as u8)
        }
        Command::QubitSweep { theta_steps, phi_steps, no_endpoints, out } => {
            let rows = QubitSweepConfig::new(theta_steps, phi_steps, !no_endpoints).and_then(|c| cmd_qubit_sweep(&c));
            let rows = match rows {
                Ok(r) => r,
                Err(e) => return fail(ExitStatus::InvalidInput, e),
            };
            let text = match out.format {
                Format::Json => to_json(&rows),
                Format::Csv => rows_to_csv(&rows),
            };
            match write(&text, out.output.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => code,
            }
        }
        Command::RandomVerify { dims, trials, seed, tol, out } => {
            let dims = match parse_dims(&dims) {
                Ok(d) => d,
                Err(e) => return fail(ExitStatus::InvalidInput, e),
            };
            let mut config = match RandomVerifyConfig::new(dims, trials, seed) {
                Ok(c) => c,
                Err(e) => return fail(ExitStatus::InvalidInput, e),
            };
            if let Some(t) = tol {
                if !(t > 0.0) {
                    return fail(ExitStatus::InvalidInput, format!("tolerance must be positive, got {t}"));
                }
                config.tolerances = config.tolerances.with_identity_tol(t);
            }
            let summary = match cmd_random_verify(&config) {
                Ok(s) => s,
                Err(e) => return fail(ExitStatus::PropertyViolation, e),
            };
            let text = match out.format {
                Format::Json => to_json(&summary),
                Format::Csv => summary.to_csv(),
            };
            if let Err(code) = write(&text, out.output.as_deref()) {
                return code;
            }
            if summary.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(ExitStatus::PropertyViolation.code() as u8)
            }
        }
        Command::Estimate { problem, samples, seed, out } => {
            let problem = match load(&problem) {
                Ok(p) => p,
                Err(e) => return fail(ExitStatus::InvalidInput, e),
            };
            let doc = match cmd_estimate(&problem, samples, seed) {
                Ok(d) => d,
                Err(e) => return fail(failure_status(&e), e),
            };
            let text = match out.format {
                Format::Json => to_json(&doc),
                Format::Csv => doc.to_csv(),
            };
            match write(&text, out.output.as_deref()) {
                Ok(()) => ExitCode::SUCCESS,
                Err(code) => code,
            }
        }
    }
}

fn main() -> ExitCode {
    match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors with 2, which is reserved for property violations here
            if e.use_stderr() {
                ExitCode::from(ExitStatus::InvalidInput.code() as u8)
            } else {
                ExitCode::SUCCESS
            }
        }
    }
}
