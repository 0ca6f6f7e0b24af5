use clap::Subcommand;
use rayon::prelude::*;
use serde::Deserialize;

use ctclab::extension::{build_sequence, deviation_bound_check};
use ctclab::linalg::operator_norm;
use ctclab::random::random_hermitian;
use ctclab::{seeded_rng, ComplexMatrix, DensityMatrix, UnitaryOperator};

use crate::io::{read_input, write_output, CliError, Csv, Field};
use crate::GlobalArgs;

#[derive(Debug, Subcommand)]
pub enum ExtendCommand {
    /// Deviation of the averaged states from consistency, one CSV row per N.
    Run,
}

const DEFAULT_SAMPLE_COUNT: usize = 20;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Lengths {
    One(usize),
    Many(Vec<usize>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Samples {
    Count(usize),
    Given(Vec<ComplexMatrix>),
}

/// `{"U", "rhoA", "seedB", "N", "epsilon", "R", "samplesB", "seed"}`.
#[derive(Debug, Deserialize)]
struct RunSpec {
    #[serde(rename = "U")]
    unitary: UnitaryOperator,
    #[serde(rename = "rhoA")]
    rho_a: DensityMatrix,
    #[serde(rename = "seedB", default)]
    seed_b: Option<DensityMatrix>,
    #[serde(rename = "N", default)]
    lengths: Option<Lengths>,
    #[serde(default)]
    epsilon: Option<f64>,
    #[serde(rename = "R", default)]
    r: Option<f64>,
    #[serde(rename = "samplesB", default)]
    samples: Option<Samples>,
    #[serde(default)]
    seed: Option<u64>,
}

pub fn run(cmd: &ExtendCommand, g: &GlobalArgs) -> Result<(), CliError> {
    let ExtendCommand::Run = cmd;
    let spec: RunSpec = read_input(g)?;
    let dim_a = spec.rho_a.dim();
    if dim_a == 0 || !spec.unitary.dim().is_multiple_of(dim_a) {
        return Err(ctclab::Error::Dimension(format!(
            "U of dimension {} does not factor over dimA = {dim_a}",
            spec.unitary.dim()
        ))
        .into());
    }
    let dim_b = spec.unitary.dim() / dim_a;
    let mut rng = seeded_rng(spec.seed.unwrap_or(g.seed));

    let (samples, r) = match spec.samples.unwrap_or(Samples::Count(DEFAULT_SAMPLE_COUNT)) {
        Samples::Given(list) => {
            let r = spec.r.unwrap_or_else(|| list.iter().map(operator_norm).fold(0.0, f64::max));
            (list, r)
        }
        Samples::Count(n) => {
            let r = spec.r.unwrap_or(1.0);
            let list = (0..n)
                .map(|_| {
                    let h = random_hermitian(dim_b, &mut rng);
                    let scale = r / operator_norm(&h);
                    h.scale_real(scale)
                })
                .collect();
            (list, r)
        }
    };

    let mut lengths = match spec.lengths {
        Some(Lengths::One(n)) => vec![n],
        Some(Lengths::Many(v)) => v,
        None => Vec::new(),
    };
    if let Some(eps) = spec.epsilon {
        if eps.is_nan() || eps <= 0.0 {
            return Err(ctclab::Error::Contract(format!("epsilon must be positive, got {eps}")).into());
        }
        // The smallest N exceeding 2R/ε.
        lengths.push((2.0 * r / eps).floor() as usize + 1);
    }
    if lengths.is_empty() {
        return Err(ctclab::Error::Contract("run needs \"N\" or \"epsilon\"".into()).into());
    }
    let n_max = *lengths.iter().max().expect("nonempty");
    let seed_b = spec.seed_b.unwrap_or_else(|| DensityMatrix::maximally_mixed(dim_b));
    let seq = build_sequence(&spec.unitary, &spec.rho_a, &seed_b, n_max)?;

    let reports =
        lengths.par_iter().map(|&n| deviation_bound_check(&seq, n, &samples, r)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = Csv::new(&["N", "maxDelta", "bound2RoverN", "marginalResidual"]);
    for rep in &reports {
        csv.row(&[
            Field::Int(rep.n as i64),
            Field::Float(rep.max_delta),
            Field::Float(rep.bound),
            Field::Float(rep.marginal_residual),
        ]);
    }
    write_output(g, &csv.finish())
}
