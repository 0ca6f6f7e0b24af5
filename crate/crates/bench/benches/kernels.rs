use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ctclab::correlations::{min_k, min_q, random_instance};
use ctclab::gibbs::{normality_contradiction_report, projector_decay_scan};
use ctclab::linalg::operator_norm;
use ctclab::politzer::field::{random_admissible_field, sample_rim_x};
use ctclab::politzer::{evaluate, rim_check, symplectic_form, Point};
use ctclab::random::{random_density, random_hermitian, random_unitary};
use ctclab::{
    build_sequence, deviation_bound_check, seeded_rng, solve_fixed_points, BipartiteSpace, ComplexMatrix, CtcChannel,
    FiniteRankObservable, PolitzerGeometry,
};

fn dctc(c: &mut Criterion) {
    let mut group = c.benchmark_group("dctc_solve");
    for (da, db) in [(2, 2), (3, 3), (4, 4)] {
        let mut rng = seeded_rng(1);
        let ch = CtcChannel::new(
            BipartiteSpace::new(da, db).unwrap(),
            random_unitary(da * db, &mut rng),
            random_density(da, &mut rng),
        )
        .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("{da}x{db}")), &ch, |b, ch| {
            b.iter(|| solve_fixed_points(black_box(ch), 1e-10).unwrap())
        });
    }
    group.finish();
}

fn extension(c: &mut Criterion) {
    let mut rng = seeded_rng(2);
    let u = random_unitary(9, &mut rng);
    let rho_a = random_density(3, &mut rng);
    let seed_b = random_density(3, &mut rng);
    let samples: Vec<ComplexMatrix> = (0..20)
        .map(|_| {
            let h = random_hermitian(3, &mut rng);
            h.scale_real(1.0 / operator_norm(&h))
        })
        .collect();
    c.bench_function("extension_sequence_1000", |b| b.iter(|| build_sequence(&u, &rho_a, &seed_b, 1000).unwrap()));
    let seq = build_sequence(&u, &rho_a, &seed_b, 1000).unwrap();
    c.bench_function("deviation_check_1000", |b| {
        b.iter(|| deviation_bound_check(&seq, 1000, black_box(&samples), 1.0).unwrap())
    });
}

fn correlations(c: &mut Criterion) {
    let inst = random_instance([2, 2, 2], 3).unwrap();
    c.bench_function("min_q_222", |b| b.iter(|| min_q(black_box(&inst)).unwrap()));
    let mut group = c.benchmark_group("min_k_222");
    group.sample_size(20);
    for grid in [64, 256] {
        group.bench_with_input(BenchmarkId::from_parameter(grid), &grid, |b, &grid| {
            b.iter(|| min_k(black_box(&inst), grid).unwrap())
        });
    }
    group.finish();
}

fn politzer(c: &mut Criterion) {
    let geom = PolitzerGeometry::new(1.0, 3.0, -5.0).unwrap();
    let f = random_admissible_field(geom, 4).unwrap();
    let g = random_admissible_field(geom, 5).unwrap();
    let mut rng = seeded_rng(6);
    let xs: Vec<f64> = (0..1000).map(|_| sample_rim_x(&f, &mut rng, 1e-6)).collect();
    c.bench_function("politzer_eval_ctc_point", |b| b.iter(|| evaluate(&f, black_box(Point::new(0.5, 0.3)))));
    c.bench_function("politzer_rim_check_1000", |b| {
        b.iter(|| xs.iter().map(|&x| rim_check(&f, x, 1e-6).unwrap().max_defect()).fold(0.0, f64::max))
    });
    c.bench_function("politzer_symplectic", |b| b.iter(|| symplectic_form(&f, &g, -5.0).unwrap()));
}

fn gibbs(c: &mut Criterion) {
    let p = FiniteRankObservable::lowest_levels(5).unwrap();
    let betas = [1.0, 0.1, 0.01, 1e-3, 1e-4];
    c.bench_function("gibbs_decay_scan", |b| b.iter(|| projector_decay_scan(&p, black_box(&betas)).unwrap()));
    let mut group = c.benchmark_group("gibbs_report");
    group.sample_size(10);
    group.bench_function("k40", |b| b.iter(|| normality_contradiction_report(&betas, 40, 1.0).unwrap()));
    group.finish();
}

criterion_group!(benches, dctc, extension, correlations, politzer, gibbs);
criterion_main!(benches);
