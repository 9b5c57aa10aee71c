//! Command-line front end for the TFU engine: problem files in, reports out.
//!
//! - [`problem`]: the TOML problem-file format.
//! - [`report`]: reports and their structured, CSV and table renderings.
//! - [`commands`]: `eval` and `search`.
//! - [`checks`]: the seeded suites behind `check`.

pub mod checks;
pub mod commands;
pub mod error;
pub mod problem;
pub mod report;

use tfu_core::inequality::JointOrdering;

pub use error::CliError;
pub use problem::ProblemFile;
pub use report::{Format, Report};

pub const DEFAULT_CASES: usize = 1000;

/// Flags shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub ordering: JointOrdering,
    pub tolerance: f64,
    pub grid_step: Option<f64>,
    pub full_phase: bool,
    pub cases: usize,
    pub inject_fault: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            ordering: JointOrdering::default(),
            tolerance: tfu_core::TOLERANCE,
            grid_step: None,
            full_phase: false,
            cases: DEFAULT_CASES,
            inject_fault: None,
        }
    }
}

impl Options {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::validation(
                "--tolerance",
                format!("must be positive and finite, got {}", self.tolerance),
            ));
        }
        if let Some(step) = self.grid_step {
            if !(step.is_finite() && step > 0.0) {
                return Err(CliError::validation("--grid-step", format!("must be positive and finite, got {step}")));
            }
        }
        if self.cases == 0 {
            return Err(CliError::validation("--cases", "must be at least 1"));
        }
        if let Some(name) = &self.inject_fault {
            if !checks::names().any(|n| n == name) {
                let known: Vec<_> = checks::names().collect();
                return Err(CliError::validation(
                    "--inject-fault",
                    format!("unknown check {name:?}; one of {known:?}"),
                ));
            }
        }
        Ok(())
    }
}

pub fn eval(file: &ProblemFile, opts: &Options) -> Result<Report, CliError> {
    opts.validate()?;
    commands::eval(file, opts)
}

pub fn search(file: &ProblemFile, opts: &Options) -> Result<Report, CliError> {
    opts.validate()?;
    commands::search(file, opts)
}

/// Runs every suite; the report fails iff some property fails.
pub fn check(opts: &Options) -> Result<Report, CliError> {
    opts.validate()?;
    let mut report = Report::new("check", opts.tolerance);
    report.seed = Some(opts.seed);
    report.input = serde_json::json!({ "cases": opts.cases });
    let config = checks::SuiteConfig {
        seed: opts.seed,
        cases: opts.cases,
        tolerance: opts.tolerance,
        fault: opts.inject_fault.clone(),
    };
    for c in checks::run_all(&config) {
        report.check(c);
    }
    Ok(report)
}
