use clap::{Args, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use ctclab::politzer::field::{sample_rim_x, RIM_EPSILON};
use ctclab::politzer::geometry::GeometrySpec;
use ctclab::politzer::localization::TimeInterval;
use ctclab::politzer::profile::ProfileSpec;
use ctclab::politzer::{
    localization, minkowski_compare, regions_equal, rim_check, symplectic_form, trace_characteristic, Chirality,
    Direction, FieldSpec, LocalizationData, MoverProfile, Point, PolitzerField, PolitzerGeometry, SpacetimeRegion,
};
use ctclab::seeded_rng;

use crate::io::{read_input, read_json, to_json, write_output, CliError, Csv, Field};
use crate::GlobalArgs;

/// Rim identities must hold to this accuracy unless --tol overrides it.
const DEFAULT_RIM_TOL: f64 = 1e-9;
/// Endpoint tolerance for region comparison.
const DEFAULT_REGION_TOL: f64 = 1e-9;

#[derive(Debug, Subcommand)]
pub enum PolitzerCommand {
    /// Follow one characteristic through the identifications; CSV `t,x,segmentId`.
    Trace(TraceArgs),
    /// Field values at points, or a rim-identity report with --rim-samples.
    Eval(EvalArgs),
    /// Back-traced Cauchy-data intervals of a region on the reference surface.
    Region,
    /// Symplectic form of two fields, or of the right and left parts of one field.
    Symplectic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ChiralityArg {
    R,
    L,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long, value_enum, default_value = "r")]
    pub chirality: ChiralityArg,
    #[arg(long, value_enum, default_value = "backward")]
    pub direction: DirectionArg,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSON list of `{"t": .., "x": ..}` points.
    #[arg(long)]
    pub points: Option<std::path::PathBuf>,
    #[arg(long, allow_negative_numbers = true, requires = "x")]
    pub t: Option<f64>,
    #[arg(long, allow_negative_numbers = true, requires = "t")]
    pub x: Option<f64>,
    /// Check both rim identities at this many random points in [-L, L].
    #[arg(long)]
    pub rim_samples: Option<usize>,
    /// Rim offset.
    #[arg(long, default_value_t = RIM_EPSILON)]
    pub epsilon: f64,
}

pub fn run(cmd: &PolitzerCommand, g: &GlobalArgs) -> Result<(), CliError> {
    match cmd {
        PolitzerCommand::Trace(args) => trace(args, g),
        PolitzerCommand::Eval(args) => eval(args, g),
        PolitzerCommand::Region => region(g),
        PolitzerCommand::Symplectic => symplectic(g),
    }
}

fn chirality(c: ChiralityArg) -> Chirality {
    match c {
        ChiralityArg::R => Chirality::R,
        ChiralityArg::L => Chirality::L,
    }
}

fn trace(args: &TraceArgs, g: &GlobalArgs) -> Result<(), CliError> {
    let spec: GeometrySpec = read_input(g)?;
    let geom = PolitzerGeometry::try_from(spec)?;
    let dir = match args.direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    };
    let tr = trace_characteristic(&geom, Point::new(args.t, args.x), chirality(args.chirality), dir)?;
    let mut csv = Csv::new(&["t", "x", "segmentId"]);
    for (k, (a, b)) in tr.segments.iter().enumerate() {
        for p in [a, b] {
            csv.row(&[Field::Float(p.t), Field::Float(p.x), Field::Int(k as i64)]);
        }
    }
    write_output(g, &csv.finish())
}

#[derive(Deserialize)]
struct PointSpec {
    t: f64,
    x: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RimReport {
    samples: usize,
    epsilon: f64,
    max_inner: f64,
    max_outer: f64,
    worst_x: f64,
    tol: f64,
    passed: bool,
}

fn eval(args: &EvalArgs, g: &GlobalArgs) -> Result<(), CliError> {
    let spec: FieldSpec = read_input(g)?;
    let field = PolitzerField::try_from(spec)?;
    if let Some(n) = args.rim_samples {
        let mut rng = seeded_rng(g.seed);
        let xs: Vec<f64> = (0..n).map(|_| sample_rim_x(&field, &mut rng, args.epsilon)).collect();
        let checks = xs.par_iter().map(|&x| rim_check(&field, x, args.epsilon)).collect::<Result<Vec<_>, _>>()?;
        let tol = g.tol.unwrap_or(DEFAULT_RIM_TOL);
        let max_inner = checks.iter().map(|c| c.inner.abs()).fold(0.0, f64::max);
        let max_outer = checks.iter().map(|c| c.outer.abs()).fold(0.0, f64::max);
        let worst_x = checks.iter().max_by(|a, b| a.max_defect().total_cmp(&b.max_defect())).map_or(0.0, |c| c.x);
        let report = RimReport {
            samples: n,
            epsilon: args.epsilon,
            max_inner,
            max_outer,
            worst_x,
            tol,
            passed: max_inner <= tol && max_outer <= tol,
        };
        return write_output(g, &to_json(&report));
    }
    let points: Vec<Point> = match (&args.points, args.t, args.x) {
        (Some(path), _, _) => read_json::<Vec<PointSpec>>(path)?.into_iter().map(|p| Point::new(p.t, p.x)).collect(),
        (None, Some(t), Some(x)) => vec![Point::new(t, x)],
        _ => return Err(CliError::Usage("eval needs --points, --t/--x or --rim-samples".into())),
    };
    let values = points.par_iter().map(|&p| minkowski_compare(&field, p)).collect::<Result<Vec<_>, _>>()?;
    let mut csv = Csv::new(&["t", "x", "value", "minkowski", "displaced"]);
    for (p, v) in points.iter().zip(&values) {
        csv.row(&[
            Field::Float(p.t),
            Field::Float(p.x),
            Field::Float(v.politzer_value),
            Field::Float(v.minkowski_value),
            Field::Text(if v.displaced { "true" } else { "false" }),
        ]);
    }
    write_output(g, &csv.finish())
}

/// `{"tau", "L", "t0", "intervals": [{t, a, b}], "compare": [...]}`.
#[derive(Deserialize)]
struct RegionSpec {
    #[serde(flatten)]
    geometry: GeometrySpec,
    intervals: Vec<TimeInterval>,
    #[serde(default)]
    compare: Option<Vec<TimeInterval>>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RegionReport {
    #[serde(flatten)]
    data: LocalizationData,
    #[serde(skip_serializing_if = "Option::is_none")]
    equal: Option<bool>,
}

fn union(intervals: &[TimeInterval]) -> SpacetimeRegion {
    SpacetimeRegion::Union { parts: intervals.iter().map(|i| SpacetimeRegion::interval(i.t, i.a, i.b)).collect() }
}

fn region(g: &GlobalArgs) -> Result<(), CliError> {
    let spec: RegionSpec = read_input(g)?;
    let geom = PolitzerGeometry::try_from(spec.geometry)?;
    let r = union(&spec.intervals);
    let data = localization(&geom, &r)?;
    let equal = match &spec.compare {
        Some(other) => Some(regions_equal(&geom, &r, &union(other), g.tol.unwrap_or(DEFAULT_REGION_TOL))?),
        None => None,
    };
    write_output(g, &to_json(&RegionReport { data, equal }))
}

#[derive(Deserialize)]
struct Profiles {
    #[serde(rename = "xiR", default)]
    xi_r: ProfileSpec,
    #[serde(rename = "xiL", default)]
    xi_l: ProfileSpec,
}

/// `{"tau", "L", "t0", "f": {xiR, xiL}, "g": {...}, "tSurface": t}`.
#[derive(Deserialize)]
struct SymplecticSpec {
    #[serde(flatten)]
    geometry: GeometrySpec,
    f: Profiles,
    #[serde(default)]
    g: Option<Profiles>,
    #[serde(rename = "tSurface", default)]
    t_surface: Option<f64>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SymplecticReport {
    sigma: f64,
    t_surface: f64,
}

fn field_from(geom: PolitzerGeometry, p: Profiles) -> Result<PolitzerField, CliError> {
    Ok(PolitzerField::new(
        geom,
        MoverProfile::from_spec(Chirality::R, p.xi_r)?,
        MoverProfile::from_spec(Chirality::L, p.xi_l)?,
    )?)
}

fn symplectic(g: &GlobalArgs) -> Result<(), CliError> {
    let spec: SymplecticSpec = read_input(g)?;
    let geom = PolitzerGeometry::try_from(spec.geometry)?;
    let f = field_from(geom, spec.f)?;
    // Without a second field, pair the right-moving part of f with its left-moving part.
    let (a, b) = match spec.g {
        Some(p) => (f, field_from(geom, p)?),
        None => {
            (PolitzerField::right_mover(geom, f.xi_r().clone())?, PolitzerField::left_mover(geom, f.xi_l().clone())?)
        }
    };
    let t_surface = spec.t_surface.unwrap_or(geom.t0());
    let sigma = symplectic_form(&a, &b, t_surface)?;
    write_output(g, &to_json(&SymplecticReport { sigma, t_surface }))
}
