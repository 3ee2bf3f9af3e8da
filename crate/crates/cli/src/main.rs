use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use caputo_l1::experiments::{DEFAULT_ALPHAS, DEFAULT_SMOOTHNESS};
use caputo_l1::QuadratureConfig;
use caputo_l1_cli::{
    apply_csv, bound_check_report, order_table_report, parse_tau, CliError, ExperimentConfig, Format, EXIT_CONFIG,
    EXIT_OK,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "caputo-l1",
    version,
    about = "L1 scheme for the Caputo derivative: order tables, bound checks, data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimated convergence orders over (alpha, k+beta)
    OrderTable(TableArgs),
    /// Compare observed truncation errors with the theoretical bound
    BoundCheck {
        #[command(flatten)]
        table: TableArgs,
        /// Absolute and relative tolerance of the reference quadrature
        #[arg(long, default_value_t = 1e-10)]
        oracle_tol: f64,
    },
    /// Apply the scheme to uniformly sampled data from a "t,y" CSV file
    Apply {
        input: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    alphas: Option<Vec<f64>>,
    /// k+beta column values in (0, 2]
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    kbeta: Option<Vec<f64>>,
    /// Base step, as a decimal or 2^-m
    #[arg(long, value_parser = parse_tau, default_value = "2^-10")]
    tau: f64,
    #[arg(long, default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl TableArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            alphas: self.alphas.clone().unwrap_or_else(|| DEFAULT_ALPHAS.to_vec()),
            kbeta: self.kbeta.clone().unwrap_or_else(|| DEFAULT_SMOOTHNESS.to_vec()),
            tau_base: self.tau,
            horizon: self.horizon,
            format: self.format,
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::OrderTable(args) => {
            let text = order_table_report(&args.config())?;
            emit(&text, args.out.as_ref())?;
            Ok(EXIT_OK)
        }
        Command::BoundCheck { table, oracle_tol } => {
            let mut notices = Vec::new();
            let report = bound_check_report(
                &table.config(),
                &QuadratureConfig::with_tolerance(oracle_tol),
                &mut notices,
            )?;
            for n in &notices {
                eprintln!("{n}");
            }
            emit(&report.text, table.out.as_ref())?;
            if report.violations > 0 {
                eprintln!("{} bound violation(s)", report.violations);
            }
            Ok(report.exit_code())
        }
        Command::Apply { input, alpha, out } => {
            let file = fs::File::open(&input)?;
            let text = apply_csv(io::BufReader::new(file), alpha)?;
            emit(&text, out.as_ref())?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_CONFIG as u8
            } else {
                EXIT_OK as u8
            });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
