//! `sumroots`: run the order-bound verifiers, square tests, sum-of-roots
//! decisions and log-gap checks from the command line. Every command
//! writes one JSON report.
//!
//! Exit codes: 0 decided or verified, 1 property violated, 2 usage or
//! input error, 3 indeterminate at the given limits.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;

use commands::{CliError, Outcome};

#[derive(Parser, Debug)]
#[command(name = "sumroots", version, about = "Order bounds and sum-of-square-roots verifiers")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Truncation precision for power series.
    #[arg(long, global = true, default_value_t = 64)]
    pub trunc: usize,
    /// Rounds of the randomized square test.
    #[arg(long, global = true, default_value_t = 64)]
    pub rounds: u32,
    /// Constant of the effective prime-density bound (assumed, not derived).
    #[arg(long = "grh-c", global = true, default_value = "1", value_parser = parse_rational_arg)]
    pub grh_c: BigRational,
    /// Maximum bit length of any exact intermediate value.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    pub bit_limit: u64,
    /// Starting precision in bits for certified evaluation.
    #[arg(long, global = true, default_value_t = 512)]
    pub precision: u32,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
}

fn parse_rational_arg(s: &str) -> Result<BigRational, String> {
    sumroots::numerics::parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated power series operations.
    #[command(subcommand)]
    Ps(PsCommand),
    /// Wronskian analysis of a family of series.
    #[command(subcommand)]
    Wronskian(WronskianCommand),
    /// Order bounds for sums of ODE solutions and the special families.
    #[command(subcommand)]
    Ode(VerifyCommand),
    /// Order bound for sums of square roots of polynomials.
    #[command(subcommand)]
    Sqrtsum(VerifyCommand),
    /// Straight-line programs.
    #[command(subcommand)]
    Slp(SlpCommand),
    /// Randomized perfect-square test.
    #[command(subcommand)]
    Sqtest(SqtestCommand),
    /// Sums of square roots.
    #[command(subcommand)]
    Ssr(SsrCommand),
    /// Sums of logarithms and the gap for linear forms.
    #[command(subcommand)]
    Loggap(LoggapCommand),
    /// Run the full acceptance suite.
    Selftest,
}

#[derive(Subcommand, Debug)]
pub enum PsCommand {
    /// Order of a series.
    Order { file: PathBuf },
    /// Square root of a series with a square constant term.
    Sqrt { file: PathBuf },
    /// Logarithm of a series with constant term 1.
    Log { file: PathBuf },
    /// Exponential of a series with constant term 0.
    Exp { file: PathBuf },
    /// Rational power of a series with constant term 1.
    Pow {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational_arg)]
        alpha: BigRational,
    },
}

#[derive(Subcommand, Debug)]
pub enum WronskianCommand {
    /// Determinant, orders and the order identity.
    Analyze { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCommand {
    /// Check the order bound on an instance file.
    Verify { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SlpCommand {
    /// Exact value.
    Eval { file: PathBuf },
    /// Value modulo `--modulus`.
    Evalmod {
        file: PathBuf,
        #[arg(long)]
        modulus: String,
    },
    /// Program computing the product of two programs.
    Product { first: PathBuf, second: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum SqtestCommand {
    /// Test whether a program's value is a perfect square.
    Run {
        /// SLP v1 file.
        file: Option<PathBuf>,
        /// Test this integer instead of a program file.
        #[arg(long, conflicts_with = "file")]
        value: Option<String>,
    },
    /// Fraction of primes up to `x` modulo which `a` is a quadratic residue.
    Density {
        #[arg(long)]
        a: String,
        #[arg(long)]
        x: u64,
    },
    /// Prime-bound exponent for programs of size `t`.
    Qexp {
        #[arg(long)]
        t: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum SsrCommand {
    /// Randomized partition into one-dimensional classes.
    Partition { file: PathBuf },
    /// Randomized partition followed by exact class sums.
    Decide { file: PathBuf },
    /// Deterministic decision for explicit values.
    Eq { file: PathBuf },
    /// Alternating binomial sum of square roots of consecutive integers.
    Binomial {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n0: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum LoggapCommand {
    /// Order of a weighted sum of logarithms of polynomials.
    Order { file: PathBuf },
    /// Exponents `p1`, `p2` for `n` terms of degree `d`.
    Exponents {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: u64,
    },
    /// Certified check of the gap for a linear form in logarithms.
    Verify { file: PathBuf },
    /// Exact checks on the coefficients `S_j`.
    Sjbounds {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        j_max: usize,
    },
}

fn dispatch(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Ps(c) => commands::ps(c, cfg),
        Command::Wronskian(WronskianCommand::Analyze { file }) => commands::wronskian_analyze(&file, cfg),
        Command::Ode(VerifyCommand::Verify { file }) => commands::ode_verify(&file, cfg),
        Command::Sqrtsum(VerifyCommand::Verify { file }) => commands::sqrtsum_verify(&file, cfg),
        Command::Slp(c) => commands::slp(c, cfg),
        Command::Sqtest(c) => commands::sqtest(c, cfg),
        Command::Ssr(c) => commands::ssr(c, cfg),
        Command::Loggap(c) => commands::loggap(c, cfg),
        Command::Selftest => commands::selftest(cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.config;
    let (report, code) = match dispatch(cli.command, &cfg) {
        Ok(outcome) => {
            let code = if outcome.violation { 1 } else { 0 };
            (outcome.report, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            (e.to_json(), e.exit_code())
        }
    };
    if let Err(e) = commands::write_report(&report, cfg.json_out.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
