use clap::{Args, Subcommand};

use ctclab::gibbs::{normality_contradiction_report, projector_decay_scan_with, FiniteRankObservable};

use crate::io::{to_json, write_output, CliError, Csv, Field};
use crate::GlobalArgs;

#[derive(Debug, Subcommand)]
pub enum GibbsCommand {
    /// `ω_β(p_k)` and `k/Z_β` along a descending β grid.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Strictly descending inverse temperatures.
    #[arg(long, value_delimiter = ',', default_value = "1,0.1,0.01,0.001")]
    pub betas: Vec<f64>,
    /// Rank of the projector onto the lowest levels (kMax with --report).
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Levels kept; defaults to max(200, ceil(30/β)) per β.
    #[arg(long)]
    pub truncation: Option<usize>,
    /// Emit the JSON report contrasting Tr(ϱ p_k) with ω_β(p_k) instead of CSV.
    #[arg(long)]
    pub report: bool,
    /// Inverse temperature of the candidate density matrix in the report.
    #[arg(long, default_value_t = 1.0)]
    pub beta_star: f64,
}

pub fn run(cmd: &GibbsCommand, g: &GlobalArgs) -> Result<(), CliError> {
    let GibbsCommand::Scan(args) = cmd;
    if args.report {
        let report = normality_contradiction_report(&args.betas, args.k, args.beta_star)?;
        return write_output(g, &to_json(&report));
    }
    let p = FiniteRankObservable::lowest_levels(args.k)?;
    let rows = projector_decay_scan_with(&p, &args.betas, args.truncation)?;
    let mut csv = Csv::new(&["beta", "omega", "bound"]);
    for r in rows {
        csv.row(&[Field::Float(r.beta), Field::Float(r.omega), Field::Float(r.bound)]);
    }
    write_output(g, &csv.finish())
}
