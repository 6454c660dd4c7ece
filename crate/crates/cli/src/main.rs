//! `fhawkes`: command-line access to the fractional Hawkes library and its
//! validation suite.
//!
//! Exit status: 0 success, 1 usage error, 2 numerical failure, 3 validation
//! criteria failed.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fhawkes_core::harness::OutputFormat;
use fhawkes_core::Engine;

use config::{Compare, CountMethod, LambdaMethod, ModelFlags};

#[derive(Debug, Parser)]
#[command(name = "fhawkes", version, about = "Fractional Hawkes process with a Mittag-Leffler kernel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Model {
    #[arg(long)]
    lambda0: Option<f64>,
    /// Branching ratio, in [0, 1).
    #[arg(long)]
    alpha: Option<f64>,
    /// Kernel order, in (0, 1].
    #[arg(long)]
    beta: Option<f64>,
    /// Kernel rate, positive.
    #[arg(long)]
    gamma: Option<f64>,
    /// JSON file with any long flag as a key (`t_max` for `--t-max`); flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Model {
    fn flags(&self) -> ModelFlags {
        ModelFlags {
            lambda0: self.lambda0,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
        }
    }
}

#[derive(Debug, Args)]
struct Output {
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Expected intensity λ(t) on the grid t_max·i/grid, i = 1..=grid.
    Lambda {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<LambdaMethod>,
        #[command(flatten)]
        output: Output,
    },
    /// Expected number of events E[N(t)].
    ExpectedN {
        #[command(flatten)]
        model: Model,
        /// Comma-separated observation times; overrides --t-max/--grid.
        #[arg(long, value_delimiter = ',')]
        times: Option<Vec<f64>>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, value_enum)]
        method: Option<CountMethod>,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Simulator for the Monte Carlo curve.
        #[arg(long)]
        engine: Option<Engine>,
        #[command(flatten)]
        output: Output,
    },
    /// Event epochs on (0, horizon].
    Simulate {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        horizon: Option<f64>,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// thinning, cluster, poisson or exp-hawkes.
        #[arg(long)]
        engine: Option<Engine>,
        #[command(flatten)]
        output: Output,
    },
    /// Empirical distribution of N(t) with an optional reference.
    Dist {
        #[command(flatten)]
        model: Model,
        /// Comma-separated observation times.
        #[arg(long = "t", value_delimiter = ',')]
        t: Option<Vec<f64>>,
        #[arg(long)]
        replicas: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        compare: Option<Compare>,
        #[arg(long)]
        engine: Option<Engine>,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance suite and write a JSON report.
    Validate {
        /// Few replicas with correspondingly wider statistical bounds.
        #[arg(long)]
        smoke: bool,
        /// Replicas per Monte Carlo criterion in smoke mode.
        #[arg(long, default_value_t = 100)]
        smoke_replicas: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Regenerate the high-precision oracle tables into this directory
        /// (needs python3 with mpmath).
        #[arg(long, hide = true)]
        regen_oracle: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(fhawkes_core::Error),
    ValidationFailed,
}

impl From<fhawkes_core::Error> for CliError {
    fn from(e: fhawkes_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(e) => match e {
                fhawkes_core::Error::Io(_)
                | fhawkes_core::Error::Csv(_)
                | fhawkes_core::Error::Json(_)
                | fhawkes_core::Error::Parse(_) => 1,
                _ => 2,
            },
            CliError::ValidationFailed => 3,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Core(c) => eprintln!("error: {c}"),
                CliError::ValidationFailed => eprintln!("validation failed"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
