//! Library side of the `bce` command-line tool.
//!
//! [`run`] parses arguments, runs one subcommand and writes a JSON (or CSV)
//! document. Exit codes: 0 on success, 2 for usage and validation errors,
//! 3 when a computation runs out of precision or memory.

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use bce_core::walk::DEFAULT_BUDGET;
use bce_core::{IntPolynomial, StepDistribution};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

pub use output::SCHEMA;

/// Environment variable overriding the default memory budget.
pub const BUDGET_ENV: &str = "BCE_BUDGET";
pub const MIN_BUDGET: usize = 10_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bce", version, about = "Entropy, growth and dimension certificates for Bernoulli convolutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Source of the constant `c` used in entropy lower bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CSource {
    /// The published value 0.44.
    #[value(name = "paper", alias = "published")]
    Published,
    /// Recompute a certified value with `cconst`.
    Certified,
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Maximum number of distinct residues per level (also via BCE_BUDGET).
    #[arg(long)]
    budget: Option<usize>,
    /// Absolute tolerance of each entropy integral.
    #[arg(long, default_value_t = bce_core::smoothedentropy::DEFAULT_QUAD_TOL)]
    tol: f64,
    /// Target radius of root enclosures, relative to max(1, |root|).
    #[arg(long, default_value_t = bce_core::numberfield::DEFAULT_TARGET_RADIUS)]
    root_radius: f64,
}

#[derive(Debug, Args)]
struct PolyArg {
    /// Integer coefficients in ascending order, e.g. "-1,1,1" for x^2 + x - 1.
    #[arg(long, allow_hyphen_values = true)]
    poly: String,
}

#[derive(Debug, Args)]
struct NuArg {
    /// Step law "a1,a2,...:p1,p2,..." with rationals as n/d; default fair coin.
    #[arg(long, allow_hyphen_values = true)]
    nu: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Certified roots, classification and Mahler measure.
    Mahler {
        #[command(flatten)]
        poly: PolyArg,
        #[command(flatten)]
        common: Common,
    },
    /// Exact support sizes and entropies of the random walk.
    Walk {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[command(flatten)]
        nu: NuArg,
        #[command(flatten)]
        common: Common,
    },
    /// Certified lower bound for the smoothed entropy gap at one scale a.
    Phi {
        #[arg(long)]
        a: f64,
        #[command(flatten)]
        nu: NuArg,
        #[command(flatten)]
        common: Common,
    },
    /// Certified lower bound for the constant c over [sqrt 2, 2].
    Cconst {
        #[arg(long, default_value_t = 64)]
        cells: usize,
        #[command(flatten)]
        nu: NuArg,
        #[command(flatten)]
        common: Common,
    },
    /// Everything known about one polynomial.
    Report {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[command(flatten)]
        nu: NuArg,
        #[arg(long, value_enum, default_value = "paper")]
        c: CSource,
        /// Cells used when --c certified.
        #[arg(long, default_value_t = 64)]
        cells: usize,
        #[arg(long = "fourier-N", default_value_t = 200)]
        fourier_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Fourier singularity certificate for a unit without circle conjugates.
    Fourier {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long = "fourier-N", default_value_t = 200)]
        fourier_n: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Compares the support size at level n with M^n.
    Mercat {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 8)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Mahler,
    Walk,
    Phi,
    Cconst,
    Report,
    Fourier,
    Mercat,
}

/// Validated settings for one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: CommandKind,
    pub poly: Option<IntPolynomial>,
    pub steps: usize,
    pub nu: StepDistribution,
    pub quad_tol: f64,
    pub root_radius: f64,
    pub budget: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub a: f64,
    pub cells: usize,
    pub c_source: CSource,
    pub fourier_n: usize,
}

/// Error raised while building or executing a run.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bce_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_validation() => EXIT_COMPUTATION,
            CliError::Io(_) => EXIT_COMPUTATION,
            _ => EXIT_VALIDATION,
        }
    }
}

fn budget_from(flag: Option<usize>) -> Result<usize, CliError> {
    let budget = match flag {
        Some(b) => b,
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_ENV} is not an integer: {v:?}")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    if budget < MIN_BUDGET {
        return Err(CliError::Usage(format!("budget {budget} is below the minimum {MIN_BUDGET}")));
    }
    Ok(budget)
}

impl RunConfig {
    fn from_command(command: Command) -> Result<Self, CliError> {
        let parse_poly = |p: &PolyArg| -> Result<Option<IntPolynomial>, CliError> { Ok(Some(p.poly.parse()?)) };
        let parse_nu = |n: &NuArg| -> Result<StepDistribution, CliError> {
            Ok(match &n.nu {
                Some(s) => s.parse()?,
                None => StepDistribution::fair_coin(),
            })
        };
        let cfg = |sub, poly, nu, common: &Common| -> Result<RunConfig, CliError> {
            Ok(RunConfig {
                subcommand: sub,
                poly,
                steps: 0,
                nu,
                quad_tol: common.tol,
                root_radius: common.root_radius,
                budget: budget_from(common.budget)?,
                format: common.format,
                output: common.output.clone(),
                a: 0.0,
                cells: 0,
                c_source: CSource::Published,
                fourier_n: 0,
            })
        };
        let config = match command {
            Command::Mahler { poly, common } => cfg(CommandKind::Mahler, parse_poly(&poly)?, StepDistribution::fair_coin(), &common)?,
            Command::Walk { poly, steps, nu, common } => RunConfig {
                steps,
                ..cfg(CommandKind::Walk, parse_poly(&poly)?, parse_nu(&nu)?, &common)?
            },
            Command::Phi { a, nu, common } => RunConfig {
                a,
                ..cfg(CommandKind::Phi, None, parse_nu(&nu)?, &common)?
            },
            Command::Cconst { cells, nu, common } => RunConfig {
                cells,
                ..cfg(CommandKind::Cconst, None, parse_nu(&nu)?, &common)?
            },
            Command::Report { poly, steps, nu, c, cells, fourier_n, common } => RunConfig {
                steps,
                c_source: c,
                cells,
                fourier_n,
                ..cfg(CommandKind::Report, parse_poly(&poly)?, parse_nu(&nu)?, &common)?
            },
            Command::Fourier { poly, fourier_n, common } => RunConfig {
                fourier_n,
                ..cfg(CommandKind::Fourier, parse_poly(&poly)?, StepDistribution::fair_coin(), &common)?
            },
            Command::Mercat { poly, steps, common } => RunConfig {
                steps,
                ..cfg(CommandKind::Mercat, parse_poly(&poly)?, StepDistribution::fair_coin(), &common)?
            },
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !(self.quad_tol > 0.0 && self.quad_tol.is_finite()) || !(self.root_radius > 0.0 && self.root_radius.is_finite()) {
            return Err(CliError::Usage("tolerances must be positive".into()));
        }
        let uses_steps = matches!(self.subcommand, CommandKind::Walk | CommandKind::Report | CommandKind::Mercat);
        if uses_steps && self.steps == 0 {
            return Err(CliError::Usage("--steps must be at least 1".into()));
        }
        let csv_ok = matches!(self.subcommand, CommandKind::Walk | CommandKind::Report | CommandKind::Mercat);
        if self.format == Format::Csv && !csv_ok {
            return Err(CliError::Usage("CSV output is available for walk, report and mercat".into()));
        }
        Ok(())
    }
}

/// Parses `argv` (including the program name) into a validated config.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    RunConfig::from_command(cli.command).map_err(|e| Cli::command().error(clap::error::ErrorKind::ValueValidation, e))
}

/// Runs the tool, writing the document to the configured output or `out`
/// and diagnostics to `err`. Returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}\n{}", Cli::command().render_help());
            return EXIT_VALIDATION;
        }
    };
    let result = RunConfig::from_command(cli.command).and_then(|cfg| {
        let text = commands::execute(&cfg)?;
        match &cfg.output {
            Some(path) => std::fs::write(path, &text)?,
            None => out.write_all(text.as_bytes())?,
        }
        Ok(())
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the tool against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_coefficients_parse() {
        let cfg = parse_config(["bce", "walk", "--poly", "-1,2", "--steps", "5"]).unwrap();
        assert_eq!(cfg.steps, 5);
        assert_eq!(cfg.poly.unwrap().to_string(), "2x - 1");
    }

    #[test]
    fn invalid_settings() {
        assert!(parse_config(["bce", "walk", "--poly", "-1,2", "--budget", "10"]).is_err());
        assert!(parse_config(["bce", "phi", "--a", "2", "--tol", "0"]).is_err());
        assert!(parse_config(["bce", "mahler", "--poly", "-1,1,1", "--format", "csv"]).is_err());
        assert!(parse_config(["bce", "frobnicate"]).is_err());
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(CliError::Core(bce_core::Error::NotUnit).exit_code(), EXIT_VALIDATION);
        assert_eq!(
            CliError::Core(bce_core::Error::MemoryBudgetExceeded { count: 1, budget: 1 }).exit_code(),
            EXIT_COMPUTATION
        );
    }
}
