use clap::{Args, Subcommand};
use serde::Serialize;

use ctclab::dctc::{cesaro_average, solve_fixed_points, verify_dctc, ChannelSpec, CtcChannel};
use ctclab::{DensityMatrix, DEFAULT_TOL};

use crate::io::{read_input, to_json, write_output, CliError};
use crate::GlobalArgs;

#[derive(Debug, Subcommand)]
pub enum DctcCommand {
    /// Direct solve: canonical fixed point and a basis of the fixed subspace.
    Solve,
    /// Cesàro mean of the orbit started at the maximally mixed state.
    Iterate(IterateArgs),
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    /// Number of orbit terms averaged.
    #[arg(long, default_value_t = 100_000)]
    pub steps: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct IterateReport {
    steps: usize,
    average: DensityMatrix,
    /// Trace-norm residual of the average.
    residual: f64,
}

fn load(g: &GlobalArgs) -> Result<CtcChannel, CliError> {
    let spec: ChannelSpec = read_input(g)?;
    Ok(CtcChannel::try_from(spec)?)
}

pub fn run(cmd: &DctcCommand, g: &GlobalArgs) -> Result<(), CliError> {
    let ch = load(g)?;
    match cmd {
        DctcCommand::Solve => {
            let fp = solve_fixed_points(&ch, g.tol.unwrap_or(DEFAULT_TOL))?;
            write_output(g, &to_json(&fp))
        }
        DctcCommand::Iterate(args) => {
            let start = DensityMatrix::maximally_mixed(ch.dim_b());
            let average = cesaro_average(&ch, &start, args.steps)?;
            let residual = verify_dctc(&ch, &average)?;
            write_output(g, &to_json(&IterateReport { steps: args.steps, average, residual }))
        }
    }
}
