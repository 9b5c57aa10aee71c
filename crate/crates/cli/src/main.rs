use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tfu_cli::{CliError, Format, Options, ProblemFile};
use tfu_core::inequality::JointOrdering;

/// Three-valued probability engine: evaluate problem files, run the
/// invariant suites, search for inequality violations.
#[derive(Debug, Parser)]
#[command(name = "tfu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate every quantity a problem file defines.
    Eval { file: PathBuf },
    /// Run the seeded invariant suites of all modules.
    Check,
    /// Grid search for a violation (wde problem with a search section).
    Search { file: PathBuf },
}

#[derive(Debug, Args)]
struct Flags {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Structured)]
    format: FormatArg,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Reading of the pairwise joints for non-commuting projectors.
    #[arg(long, global = true, value_enum, default_value_t = OrderingArg::Symmetrized)]
    ordering: OrderingArg,
    /// Identity tolerance.
    #[arg(long, global = true, default_value_t = tfu_core::TOLERANCE)]
    tolerance: f64,
    /// Polar grid step, overriding the problem file.
    #[arg(long, global = true)]
    grid_step: Option<f64>,
    /// Also scan azimuths over [0, 2π) with the grid step.
    #[arg(long, global = true)]
    full_phase: bool,
    /// Random cases per suite.
    #[arg(long, global = true, default_value_t = tfu_cli::DEFAULT_CASES)]
    cases: usize,
    #[arg(long, global = true, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Structured,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OrderingArg {
    Sequential,
    Symmetrized,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let f = cli.flags;
    let opts = Options {
        seed: f.seed,
        ordering: match f.ordering {
            OrderingArg::Sequential => JointOrdering::Sequential,
            OrderingArg::Symmetrized => JointOrdering::Symmetrized,
        },
        tolerance: f.tolerance,
        grid_step: f.grid_step,
        full_phase: f.full_phase,
        cases: f.cases,
        inject_fault: f.inject_fault,
    };
    let format = match f.format {
        FormatArg::Structured => Format::Structured,
        FormatArg::Csv => Format::Csv,
        FormatArg::Table => Format::Table,
    };
    let report = match cli.command {
        Command::Eval { file } => tfu_cli::eval(&ProblemFile::load(&file)?, &opts)?,
        Command::Search { file } => tfu_cli::search(&ProblemFile::load(&file)?, &opts)?,
        Command::Check => tfu_cli::check(&opts)?,
    };
    print!("{}", report.render(format));
    if report.passed {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        for c in report.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}: {}", c.name, c.counterexample.as_deref().unwrap_or("no counterexample"));
        }
        Err(CliError::PropertyFailure { failed })
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tfu: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
