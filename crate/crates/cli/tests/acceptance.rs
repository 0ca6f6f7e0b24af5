//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Reference values are recomputed here through independent routes
//! (hand-rolled partial traces, closed-form geometric sums) rather than
//! read back from the library.

use std::error::Error as StdError;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use ctclab::correlations::{
    check_invariance, default_samples, min_k, min_q, random_instance, CorrelationInstance, DEFAULT_RANDOM_SAMPLES,
    INVARIANCE_TOL,
};
use ctclab::extension::{build_sequence, deviation_bound_check};
use ctclab::gibbs::{
    default_truncation, gibbs_expectation, normality_contradiction_report, partition_function, partition_partial_sum,
    FiniteRankObservable, OscillatorGibbs,
};
use ctclab::linalg::{operator_norm, trace_norm};
use ctclab::politzer::field::{random_admissible_field, sample_rim_x};
use ctclab::politzer::{
    evaluate, minkowski_compare, regions_equal, rim_check, symplectic_form, wrap_orbit_regions, Point, PolitzerField,
    PolitzerGeometry,
};
use ctclab::random::{random_density, random_hermitian, random_index, random_state_vector, random_unitary, uniform};
use ctclab::{
    seeded_rng, solve_fixed_points, BipartiteSpace, ChannelSpec, ComplexMatrix, CtcChannel, UnitaryOperator, C64,
    DEFAULT_TOL,
};

type Outcome = Result<(bool, String), Box<dyn StdError>>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("fixed-point existence", dctc_existence),
        ("extension deviation bound", extension_bound),
        ("comparable correlations equivalence", correlation_equivalence),
        ("rim identities and symplectic form", politzer_rims),
        ("wrap-orbit localization and displacement", politzer_localization),
        ("Gibbs limit on finite-rank projectors", gibbs_limits),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {detail} [{:.2}s]",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, rb) = (a.rows(), b.rows());
    ComplexMatrix::from_fn(ra * rb, ra * rb, |i, j| a.get(i / rb, j / rb) * b.get(i % rb, j % rb))
}

/// Trace over the first factor of a `da·db` square matrix, by index loops.
fn trace_out_a(m: &ComplexMatrix, da: usize, db: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(db, db, |i, j| (0..da).map(|a| m.get(a * db + i, a * db + j)).sum())
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let n = a.rows();
    (0..n).flat_map(|i| (0..n).map(move |k| (i, k))).map(|(i, k)| a.get(i, k) * b.get(k, i)).sum()
}

fn random_dims(rng: &mut ctclab::Rng) -> (usize, usize) {
    (2 + random_index(rng, 3), 2 + random_index(rng, 3))
}

fn dctc_existence() -> Outcome {
    let start = Instant::now();
    let mut rng = seeded_rng(0xDC7C);
    let mut worst = 0.0f64;
    let mut invalid = 0;
    for _ in 0..200 {
        let (da, db) = random_dims(&mut rng);
        let u = random_unitary(da * db, &mut rng);
        let rho_a = random_density(da, &mut rng);
        let ch = CtcChannel::new(BipartiteSpace::new(da, db)?, u.clone(), rho_a.clone())?;
        let sol = solve_fixed_points(&ch, DEFAULT_TOL)?;
        let rho_b = sol.canonical.matrix();
        let joint = kron(rho_a.matrix(), rho_b);
        let evolved = u.matrix().adjoint().checked_mul(&joint)?.checked_mul(u.matrix())?;
        let image = trace_out_a(&evolved, da, db);
        worst = worst.max(trace_norm(&(&image - rho_b)));
        let valid = (rho_b.trace() - C64::new(1.0, 0.0)).norm() <= 1e-12
            && rho_b.is_hermitian(1e-12)
            && sol.canonical.min_eigenvalue() >= -1e-12;
        if !valid {
            invalid += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        worst <= 1e-10 && invalid == 0 && secs <= 60.0,
        format!("200 channels, max trace-norm residual {worst:.3e}, invalid states {invalid}, {secs:.2}s"),
    ))
}

fn extension_bound() -> Outcome {
    let mut rng = seeded_rng(0xE47);
    let ns = [10, 100, 1000];
    let (mut worst_ratio, mut worst_marginal, mut worst_tele, mut worst_oracle) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..50 {
        let (da, db) = random_dims(&mut rng);
        let u = random_unitary(da * db, &mut rng);
        let rho_a = random_density(da, &mut rng);
        let seed_b = random_density(db, &mut rng);
        let samples: Vec<ComplexMatrix> = (0..20)
            .map(|_| {
                let h = random_hermitian(db, &mut rng);
                h.scale_real(uniform(&mut rng, 0.5, 1.0) / operator_norm(&h))
            })
            .collect();
        let seq = build_sequence(&u, &rho_a, &seed_b, 1000)?;

        // Independent B marginals: β₁ = seed, βₙ₊₁ = Tr_A(U(ρ_A ⊗ βₙ)U†).
        let mut betas = vec![seed_b.matrix().clone()];
        for _ in 1..1000 {
            let joint = kron(rho_a.matrix(), betas.last().expect("nonempty"));
            let evolved = u.matrix().checked_mul(&joint)?.checked_mul(&u.matrix().adjoint())?;
            betas.push(trace_out_a(&evolved, da, db));
        }
        let id_a = ComplexMatrix::identity(da);
        for &n in &ns {
            let report = deviation_bound_check(&seq, n, &samples, 1.0)?;
            let mut avg = ComplexMatrix::zeros(db, db);
            for b in &betas[..n] {
                avg = &avg + b;
            }
            let omega = kron(rho_a.matrix(), &avg.scale_real(1.0 / n as f64));
            let oracle = samples
                .iter()
                .map(|b| {
                    let big = kron(&id_a, b);
                    let moved = u.matrix().adjoint().checked_mul(&big)?.checked_mul(u.matrix())?;
                    Ok(trace_of_product(&omega, &(&moved - &big)).norm())
                })
                .collect::<Result<Vec<f64>, Box<dyn StdError>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            worst_ratio = worst_ratio.max(report.max_delta * n as f64 / 2.0);
            worst_oracle = worst_oracle.max((oracle - report.max_delta).abs());
            worst_marginal = worst_marginal.max(report.marginal_residual);
            worst_tele = worst_tele.max(report.max_telescoping_gap);
        }
    }
    Ok((
        worst_ratio <= 1.0 && worst_marginal <= 1e-12 && worst_tele <= 1e-10 && worst_oracle <= 1e-12,
        format!(
            "max δ·N/2 = {worst_ratio:.4}, marginal {worst_marginal:.2e}, telescoping {worst_tele:.2e}, \
             oracle gap {worst_oracle:.2e}"
        ),
    ))
}

fn correlation_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut precondition_failures = 0;
    for s in 0..50 {
        let inst = random_instance([2, 2, 2], 7000 + s)?;
        if !check_invariance(&inst, INVARIANCE_TOL) {
            precondition_failures += 1;
            continue;
        }
        let q = min_q(&inst)?.min_q;
        let k = min_k(&inst, 256)?.min_k;
        worst = worst.max((k * k - (q + 1.0)).abs() / (q + 1.0));
    }
    let mut rng = seeded_rng(0xC0);
    let mut trivial = 0.0f64;
    for _ in 0..10 {
        let inst = CorrelationInstance::new(
            [2, 2, 2],
            random_state_vector(8, &mut rng),
            UnitaryOperator::identity(4),
            default_samples(2, DEFAULT_RANDOM_SAMPLES, &mut rng),
            default_samples(2, DEFAULT_RANDOM_SAMPLES, &mut rng),
        )?;
        let q = min_q(&inst)?.min_q;
        let k = min_k(&inst, 256)?.min_k;
        trivial = trivial.max(q.abs()).max((k - 1.0).abs());
    }
    Ok((
        worst <= 1e-3 && precondition_failures == 0 && trivial <= 1e-10,
        format!(
            "50 instances, max |K²−(q+1)|/(q+1) = {worst:.2e}, precondition failures {precondition_failures}, \
             trivial (q, K−1) deviation {trivial:.1e}"
        ),
    ))
}

fn geometries() -> Result<[PolitzerGeometry; 2], ctclab::Error> {
    Ok([PolitzerGeometry::new(1.0, 3.0, -5.0)?, PolitzerGeometry::new(0.75, 2.0, -4.0)?])
}

fn politzer_rims() -> Outcome {
    let eps = 1e-6;
    let (mut worst_rim, mut worst_sigma, mut worst_drift, mut largest_sigma) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut live = 0;
    for s in 0..10u64 {
        let geom = geometries()?[s as usize % 2];
        let f = random_admissible_field(geom, 100 + s)?;
        let g = random_admissible_field(geom, 200 + s)?;
        let mut rng = seeded_rng(300 + s);
        for _ in 0..1000 {
            let x = sample_rim_x(&f, &mut rng, eps);
            let rim = rim_check(&f, x, eps)?;
            worst_rim = worst_rim.max(rim.max_defect());
            if evaluate(&f, Point::new(geom.tau() - eps, x))?.abs() > 1e-3 {
                live += 1;
            }
        }
        let fr = PolitzerField::right_mover(geom, f.xi_r().clone())?;
        let gl = PolitzerField::left_mover(geom, g.xi_l().clone())?;
        worst_sigma = worst_sigma.max(symplectic_form(&fr, &gl, geom.t0())?.abs());
        let s1 = symplectic_form(&f, &g, geom.t0())?;
        let s2 = symplectic_form(&f, &g, -1.5 * geom.tau())?;
        worst_drift = worst_drift.max((s1 - s2).abs());
        largest_sigma = largest_sigma.max(s1.abs());
    }
    Ok((
        worst_rim <= 1e-9 && worst_sigma <= 1e-8 && worst_drift <= 1e-8 && live > 0,
        format!(
            "10 fields x 1000 rim points, max defect {worst_rim:.2e} ({live} nonzero rim values), \
             |σ(R, L)| {worst_sigma:.2e}, drift {worst_drift:.2e} (|σ| up to {largest_sigma:.3})"
        ),
    ))
}

fn politzer_localization() -> Outcome {
    let geom = geometries()?[0];
    let orbit = wrap_orbit_regions(&geom, Point::new(0.2, 0.4), 0.05)?;
    let mut regions = vec![orbit.seed.clone()];
    regions.extend(orbit.orbit.iter().cloned());
    let mut pairs_equal = true;
    for (i, a) in regions.iter().enumerate() {
        for b in &regions[i + 1..] {
            pairs_equal &= regions_equal(&geom, a, b, 1e-9)?;
        }
    }
    let control_differs = !regions_equal(&geom, &orbit.seed, &orbit.control, 1e-9)?;

    let field = PolitzerField::right_mover(geom, random_admissible_field(geom, 77)?.xi_r().clone())?;
    let mut rng = seeded_rng(0x5A);
    let (mut worst, mut checked, mut nonzero, mut unflagged) = (0.0f64, 0, 0, 0);
    while checked < 500 {
        let dt = uniform(&mut rng, 0.01, 2.0);
        let x_rim = uniform(&mut rng, -geom.l() + 0.05, geom.l() - 0.05);
        let p = Point::new(geom.tau() + dt, x_rim + dt);
        let Ok(cmp) = minkowski_compare(&field, p) else {
            continue;
        };
        let expected = field.xi_r().eval(p.t - p.x - 2.0 * geom.tau());
        worst = worst.max((cmp.politzer_value - expected).abs());
        if expected.abs() > 1e-3 {
            nonzero += 1;
            if !cmp.displaced {
                unflagged += 1;
            }
        }
        checked += 1;
    }
    Ok((
        pairs_equal && control_differs && !orbit.orbit.is_empty() && worst <= 1e-10 && nonzero > 0 && unflagged == 0,
        format!(
            "orbit of {} regions equal pairwise: {pairs_equal}, control differs: {control_differs}, \
             displacement error {worst:.1e} over {checked} points ({nonzero} nonzero)",
            regions.len()
        ),
    ))
}

fn gibbs_limits() -> Outcome {
    let start = Instant::now();
    let betas = [1.0, 0.1, 0.01, 1e-3, 1e-4];
    let mut z_gap = 0.0f64;
    for &beta in &betas {
        let n = default_truncation(beta);
        let z = partition_function(beta)?;
        let q = (-beta).exp();
        // Geometric series in closed form, written independently of the library.
        let s_oracle = (-beta / 2.0).exp() * (-(-beta * n as f64).exp_m1()) / (1.0 - q);
        let s = partition_partial_sum(beta, n)?;
        z_gap = z_gap.max((s - s_oracle).abs() / s_oracle).max((z - s_oracle).abs() / z);
    }
    let (mut bound_ok, mut omega_gap) = (true, 0.0f64);
    let mut rows = 0;
    for &beta in &betas {
        let g = OscillatorGibbs::with_default_truncation(beta)?;
        let z = partition_function(beta)?;
        for k in 1..=40 {
            let omega = gibbs_expectation(&g, &FiniteRankObservable::lowest_levels(k)?)?.value;
            bound_ok &= omega <= k as f64 / z;
            omega_gap = omega_gap.max((omega - (-(-beta * k as f64).exp_m1())).abs());
            rows += 1;
        }
    }
    let g = OscillatorGibbs::with_default_truncation(1e-4)?;
    let p5 = gibbs_expectation(&g, &FiniteRankObservable::lowest_levels(5)?)?.value;
    let one = gibbs_expectation(&g, &FiniteRankObservable::Identity)?.value;
    let report = normality_contradiction_report(&betas, 40, 1.0)?;
    let tr40 = report.density_traces.iter().find(|(k, _)| *k == 40).map_or(0.0, |r| r.1);
    let secs = start.elapsed().as_secs_f64();
    Ok((
        z_gap <= 1e-12
            && bound_ok
            && omega_gap <= 1e-12
            && p5 <= 5.1e-4
            && (one - 1.0).abs() <= 1e-12
            && tr40 >= 1.0 - 1e-10
            && secs <= 5.0,
        format!(
            "Z gap {z_gap:.1e}, ω(p_k) ≤ k/Z on {rows} rows: {bound_ok} (closed-form gap {omega_gap:.1e}), \
             ω(p₅) = {p5:.4e} at β=1e-4, ω(1) − 1 = {:.1e}, Tr(ϱ p₄₀) = {tr40}, {secs:.2}s",
            one - 1.0
        ),
    ))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run_cli(args: &[String]) -> Result<Vec<u8>, Box<dyn StdError>> {
    let out = Command::new(env!("CARGO_BIN_EXE_ctclab")).args(args).output()?;
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)).into());
    }
    Ok(out.stdout)
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir()?;
    let mut rng = seeded_rng(0xC11);
    let ch = CtcChannel::new(BipartiteSpace::new(3, 2)?, random_unitary(6, &mut rng), random_density(3, &mut rng))?;
    let channel = dir.path().join("channel.json");
    std::fs::write(&channel, serde_json::to_string(&ChannelSpec::from(ch))?)?;

    let p = |path: PathBuf| path.display().to_string();
    let commands: Vec<Vec<String>> = vec![
        vec!["dctc".into(), "solve".into(), "--in".into(), p(channel.clone())],
        vec!["dctc".into(), "iterate".into(), "--steps".into(), "2000".into(), "--in".into(), p(channel)],
        vec!["extend".into(), "run".into(), "--in".into(), p(data("swap_extension.json"))],
        vec!["corr".into(), "verify".into(), "--random".into(), "2,2,2".into()],
        vec![
            "politzer".into(),
            "eval".into(),
            "--rim-samples".into(),
            "400".into(),
            "--in".into(),
            p(data("field.json")),
        ],
        vec![
            "politzer".into(),
            "eval".into(),
            "--points".into(),
            p(data("points.json")),
            "--in".into(),
            p(data("field.json")),
        ],
        vec!["politzer".into(), "region".into(), "--in".into(), p(data("region.json"))],
        vec!["gibbs".into(), "scan".into(), "--report".into()],
    ];
    let mut mismatches = Vec::new();
    for cmd in &commands {
        let with = |jobs: &str| {
            let mut args = cmd.clone();
            args.extend(["--seed".into(), "11".into(), "--jobs".into(), jobs.into()]);
            run_cli(&args)
        };
        let first = with("1")?;
        if first != with("1")? || first != with("4")? {
            mismatches.push(cmd[..2].join(" "));
        }
    }
    Ok((
        mismatches.is_empty(),
        format!("{} commands repeated with --jobs 1 and 4, mismatches: {mismatches:?}", commands.len()),
    ))
}
