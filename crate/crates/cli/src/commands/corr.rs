use clap::{Args, Subcommand};

use ctclab::correlations::{random_instance, verify_lemma_with, CorrelationInstance, InstanceSpec, DEFAULT_PHASE_GRID};

use crate::io::{read_input, to_json, write_output, CliError};
use crate::GlobalArgs;

/// Relative tolerance on `K² = Q + 1`.
const DEFAULT_LEMMA_TOL: f64 = 1e-3;

#[derive(Debug, Subcommand)]
pub enum CorrCommand {
    /// Compare the two correlation thresholds on an instance.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Generate a random instance with these dimensions (e.g. `2,2,2`) instead of reading --in.
    #[arg(long, value_delimiter = ',')]
    pub random: Option<Vec<usize>>,
    /// Phase grid for the K search.
    #[arg(long, default_value_t = DEFAULT_PHASE_GRID)]
    pub grid: usize,
    /// Include the per-pair data in the report.
    #[arg(long)]
    pub per_pair: bool,
}

pub fn run(cmd: &CorrCommand, g: &GlobalArgs) -> Result<(), CliError> {
    let CorrCommand::Verify(args) = cmd;
    let inst = match &args.random {
        Some(d) => match d[..] {
            [d1, d2, d3] => random_instance([d1, d2, d3], g.seed)?,
            _ => return Err(CliError::Usage("--random takes three dimensions, e.g. 2,2,2".into())),
        },
        None => {
            let spec: InstanceSpec = read_input(g)?;
            CorrelationInstance::from_spec(spec)?
        }
    };
    let mut report = verify_lemma_with(&inst, g.tol.unwrap_or(DEFAULT_LEMMA_TOL), args.grid)?;
    if !args.per_pair {
        report.per_pair.clear();
    }
    write_output(g, &to_json(&report))
}
