//! Seeded random instances.
//!
//! Every randomized routine in the crate draws from [`Rng`], ChaCha20 seeded
//! through `SeedableRng::seed_from_u64`, so a seed names the same stream of
//! instances on every platform.

use nalgebra::DMatrix;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, DensityMatrix, UnitaryOperator, C64};

pub type Rng = ChaCha20Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix.
pub fn random_complex_matrix(rows: usize, cols: usize, rng: &mut Rng) -> ComplexMatrix {
    let data: Vec<C64> = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix::new(rows, cols, data).expect("positive shape")
}

pub fn random_hermitian(d: usize, rng: &mut Rng) -> ComplexMatrix {
    random_complex_matrix(d, d, rng).hermitian_part()
}

/// Haar-distributed unitary (QR of a Ginibre matrix with the phase of `R`'s diagonal removed).
pub fn random_unitary(d: usize, rng: &mut Rng) -> UnitaryOperator {
    let g = random_complex_matrix(d, d, rng).into_nalgebra();
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let fixed = DMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
        q[(i, j)] * phase
    });
    UnitaryOperator::new(ComplexMatrix::from_nalgebra(fixed).expect("finite")).expect("QR factor is unitary")
}

/// Full-rank random state `G G† / Tr(G G†)`.
pub fn random_density(d: usize, rng: &mut Rng) -> DensityMatrix {
    let g = random_complex_matrix(d, d, rng);
    DensityMatrix::from_unnormalized(&(&g * &g.adjoint())).expect("Ginibre Gram matrix is positive")
}

/// Uniformly distributed unit vector.
pub fn random_state_vector(d: usize, rng: &mut Rng) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Point drawn uniformly from the probability simplex.
pub fn random_probabilities(n: usize, rng: &mut Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn random_index(rng: &mut Rng, n: usize) -> usize {
    rng.random_range(0..n)
}
