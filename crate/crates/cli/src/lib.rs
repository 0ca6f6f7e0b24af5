//! Command-line front end: reads JSON specs, runs one computation, writes JSON or CSV.
//!
//! Exit codes: 0 on success, 1 for usage, parse, contract and solver
//! failures, 2 for I/O failures. Every failure prints one JSON object
//! `{"error": kind, "message": text}` on stderr.

mod commands;
mod io;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use io::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "ctclab",
    version,
    about = "D-CTC fixed points, extension sequences, correlations, Politzer fields, Gibbs limits"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance override; each command documents its default.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads for independent batch items.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Input JSON file.
    #[arg(long = "in", global = true)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fixed points of the CTC channel.
    #[command(subcommand)]
    Dctc(commands::dctc::DctcCommand),
    /// Averaged product-extension sequences.
    #[command(subcommand)]
    Extend(commands::extend::ExtendCommand),
    /// Comparable-correlations test.
    #[command(subcommand)]
    Corr(commands::corr::CorrCommand),
    /// Massless field on the Politzer spacetime.
    #[command(subcommand)]
    Politzer(commands::politzer::PolitzerCommand),
    /// Oscillator Gibbs states on finite-rank projectors.
    #[command(subcommand)]
    Gibbs(commands::gibbs::GibbsCommand),
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            return report(&CliError::Usage(e.to_string().trim().to_string()));
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    if cli.global.jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {} workers: {e}", cli.global.jobs)))?;
    pool.install(|| match &cli.command {
        Command::Dctc(c) => commands::dctc::run(c, &cli.global),
        Command::Extend(c) => commands::extend::run(c, &cli.global),
        Command::Corr(c) => commands::corr::run(c, &cli.global),
        Command::Politzer(c) => commands::politzer::run(c, &cli.global),
        Command::Gibbs(c) => commands::gibbs::run(c, &cli.global),
    })
}

fn report(e: &CliError) -> i32 {
    let diag = serde_json::json!({ "error": e.kind(), "message": e.message() });
    eprintln!("{diag}");
    e.exit_code()
}
