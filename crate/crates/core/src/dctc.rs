//! The Deutsch consistency condition as a fixed-point problem.
//!
//! A [`CtcChannel`] bundles the coupling unitary `U` on `H_A ⊗ H_B` with the
//! chronology-respecting input `ρ_A`. The induced map on the looping system is
//!
//! ```text
//! Φ(ρ_B) = Tr_A( U† (ρ_A ⊗ ρ_B) U )
//! ```
//!
//! Note the ordering: states evolve as `ρ ↦ U†ρU`, not the `UρU†` found in most
//! quantum-computing texts. The two conventions differ by `U ↔ U†`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    null_space, operator_norm, partial_trace, tensor_product, trace_norm, BipartiteSpace, ComplexMatrix, DensityMatrix,
    Subsystem, UnitaryOperator, C64,
};

/// Upper limit on Cesàro steps used when the direct solve is not positive.
pub const CESARO_FALLBACK_STEPS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelSpec", into = "ChannelSpec")]
pub struct CtcChannel {
    space: BipartiteSpace,
    unitary: UnitaryOperator,
    rho_a: DensityMatrix,
}

/// Wire form `{"dimA": n, "dimB": m, "U": <matrix>, "rhoA": <matrix>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelSpec {
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "dimB")]
    pub dim_b: usize,
    #[serde(rename = "U")]
    pub unitary: UnitaryOperator,
    #[serde(rename = "rhoA")]
    pub rho_a: DensityMatrix,
}

impl TryFrom<ChannelSpec> for CtcChannel {
    type Error = Error;
    fn try_from(s: ChannelSpec) -> Result<Self> {
        CtcChannel::new(BipartiteSpace::new(s.dim_a, s.dim_b)?, s.unitary, s.rho_a)
    }
}

impl From<CtcChannel> for ChannelSpec {
    fn from(c: CtcChannel) -> Self {
        ChannelSpec { dim_a: c.space.dim_a, dim_b: c.space.dim_b, unitary: c.unitary, rho_a: c.rho_a }
    }
}

impl CtcChannel {
    pub fn new(space: BipartiteSpace, unitary: UnitaryOperator, rho_a: DensityMatrix) -> Result<Self> {
        if unitary.dim() != space.joint() {
            return Err(Error::Dimension(format!(
                "unitary has dimension {} but the joint space is {}x{}",
                unitary.dim(),
                space.dim_a,
                space.dim_b
            )));
        }
        if rho_a.dim() != space.dim_a {
            return Err(Error::Dimension(format!("rhoA has dimension {}, expected {}", rho_a.dim(), space.dim_a)));
        }
        Ok(Self { space, unitary, rho_a })
    }

    /// Infers `dim_b` from the unitary and `ρ_A`.
    pub fn from_parts(unitary: UnitaryOperator, rho_a: DensityMatrix) -> Result<Self> {
        let (n, da) = (unitary.dim(), rho_a.dim());
        if n % da != 0 {
            return Err(Error::Dimension(format!("unitary dimension {n} is not a multiple of dimA = {da}")));
        }
        Self::new(BipartiteSpace::new(da, n / da)?, unitary, rho_a)
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    pub fn unitary(&self) -> &UnitaryOperator {
        &self.unitary
    }

    pub fn rho_a(&self) -> &DensityMatrix {
        &self.rho_a
    }

    pub fn dim_b(&self) -> usize {
        self.space.dim_b
    }

    /// Linear extension of `Φ` to arbitrary `dim_b × dim_b` operators.
    pub fn apply_linear(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let joint = tensor_product(self.rho_a.matrix(), x).expect("dimensions validated at construction");
        let evolved = self.unitary.conjugate_adjoint(&joint);
        partial_trace(&evolved, self.space, Subsystem::A).expect("dimensions validated at construction")
    }

    fn check_b(&self, rho_b: &DensityMatrix) -> Result<()> {
        if rho_b.dim() != self.space.dim_b {
            return Err(Error::Dimension(format!("rhoB has dimension {}, expected {}", rho_b.dim(), self.space.dim_b)));
        }
        Ok(())
    }
}

/// `Φ(ρ_B) = Tr_A(U†(ρ_A ⊗ ρ_B)U)`.
pub fn ctc_map(ch: &CtcChannel, rho_b: &DensityMatrix) -> Result<DensityMatrix> {
    ch.check_b(rho_b)?;
    DensityMatrix::new(ch.apply_linear(rho_b.matrix()))
}

/// Matrix `M` with `vec(Φ(X)) = M vec(X)` under column stacking.
pub fn channel_superoperator(ch: &CtcChannel) -> ComplexMatrix {
    let d = ch.dim_b();
    let mut columns = Vec::with_capacity(d * d);
    // Column k + l*d is the image of the matrix unit E_kl.
    for l in 0..d {
        for k in 0..d {
            let unit =
                ComplexMatrix::from_fn(
                    d,
                    d,
                    |i, j| {
                        if i == k && j == l {
                            C64::new(1.0, 0.0)
                        } else {
                            C64::new(0.0, 0.0)
                        }
                    },
                );
            columns.push(ch.apply_linear(&unit).vectorize());
        }
    }
    ComplexMatrix::from_columns(&columns).expect("square superoperator")
}

/// Solution set of the consistency condition for one channel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixedPointResult {
    /// Cesàro limit of the orbit started at `I/dim_b`.
    pub canonical: DensityMatrix,
    /// Hilbert–Schmidt orthonormal Hermitian basis of the fixed subspace.
    #[serde(rename = "fixedSubspaceBasis")]
    pub fixed_subspace_basis: Vec<ComplexMatrix>,
    /// `‖Φ(canonical) − canonical‖_F`.
    pub residual: f64,
    /// Cesàro steps taken; zero for a direct solve.
    pub iterations: usize,
}

impl FixedPointResult {
    pub fn subspace_dimension(&self) -> usize {
        self.fixed_subspace_basis.len()
    }
}

/// Direct solve through the null space of `M − I`.
///
/// `tol` bounds both the residual of every reported basis element and of the
/// canonical state. Existence is guaranteed for any channel, so a failure
/// means `tol` is tighter than the arithmetic can deliver.
pub fn solve_fixed_points(ch: &CtcChannel, tol: f64) -> Result<FixedPointResult> {
    if !(tol > 0.0) {
        return Err(Error::Contract(format!("tolerance must be positive, got {tol}")));
    }
    let d = ch.dim_b();
    let m = channel_superoperator(ch);
    let defect = &m - &ComplexMatrix::identity(d * d);
    let scale = operator_norm(&defect).max(1.0);
    let right = null_space(&defect, tol / scale);
    if right.is_empty() {
        return Err(Error::Solver(format!("no fixed direction found at tolerance {tol:e}")));
    }
    let basis = hermitian_basis(&right, d);

    let start = DensityMatrix::maximally_mixed(d);
    if let Some(candidate) = spectral_projection(&defect, &right, tol / scale, &start) {
        if let Ok(rho) = DensityMatrix::from_unnormalized(&ComplexMatrix::unvectorize(d, &candidate)?) {
            let residual = (&ch.apply_linear(rho.matrix()) - rho.matrix()).frobenius_norm();
            if residual <= tol {
                return Ok(FixedPointResult { canonical: rho, fixed_subspace_basis: basis, residual, iterations: 0 });
            }
        }
    }

    // Cesàro averages are positive by construction; polish onto the fixed set.
    let (average, steps) = cesaro_until(ch, &m, &start, tol);
    let projected = project_onto_span(average.matrix(), &basis);
    let rho = DensityMatrix::from_unnormalized(&projected)
        .map_err(|e| Error::Solver(format!("projected Cesàro average is not a state: {e}")))?;
    let residual = (&ch.apply_linear(rho.matrix()) - rho.matrix()).frobenius_norm();
    if residual > tol {
        return Err(Error::Solver(format!(
            "best fixed-point candidate has residual {residual:e} above tolerance {tol:e}"
        )));
    }
    Ok(FixedPointResult { canonical: rho, fixed_subspace_basis: basis, residual, iterations: steps })
}

/// Hermitian, HS-orthonormal basis spanning the same complex space as `vectors`.
fn hermitian_basis(vectors: &[Vec<C64>], d: usize) -> Vec<ComplexMatrix> {
    let half_i = C64::new(0.0, -0.5);
    let mut out: Vec<ComplexMatrix> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let h = ComplexMatrix::unvectorize(d, v).expect("d² entries");
        let hd = h.adjoint();
        let parts = [(&h + &hd).scale_real(0.5), (&h - &hd).scale(half_i)];
        for mut p in parts {
            if out.len() == vectors.len() {
                break;
            }
            let original = p.frobenius_norm();
            for b in &out {
                let overlap = b.hs_inner(&p).re;
                p = &p - &b.scale_real(overlap);
            }
            let n = p.frobenius_norm();
            if n > 1e-8 * original.max(f64::MIN_POSITIVE) && n > 1e-12 {
                out.push(p.hermitian_part().scale_real(1.0 / n));
            }
        }
    }
    out
}

/// `P x` where `P` is the spectral projector onto the eigenvalue-1 space of `M`.
///
/// For a channel the peripheral eigenvalue 1 is semisimple, so `P` equals the
/// Cesàro limit `lim (1/N) Σ Mⁿ` and `P x` is the long-run average of the orbit.
fn spectral_projection(
    defect: &ComplexMatrix,
    right: &[Vec<C64>],
    rel_tol: f64,
    start: &DensityMatrix,
) -> Option<Vec<C64>> {
    let left = null_space(&defect.adjoint(), rel_tol);
    if left.len() != right.len() {
        return None;
    }
    let r = ComplexMatrix::from_columns(right).ok()?.into_nalgebra();
    let l = ComplexMatrix::from_columns(&left).ok()?.into_nalgebra();
    let gram: DMatrix<C64> = l.adjoint() * &r;
    let inv = gram.try_inverse()?;
    let x = nalgebra::DVector::from_column_slice(&start.matrix().vectorize());
    let px = r * (inv * (l.adjoint() * x));
    Some(px.iter().copied().collect())
}

fn project_onto_span(x: &ComplexMatrix, basis: &[ComplexMatrix]) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(x.rows(), x.cols());
    for b in basis {
        acc = &acc + &b.scale(b.hs_inner(x));
    }
    acc
}

fn cesaro_until(ch: &CtcChannel, m: &ComplexMatrix, start: &DensityMatrix, tol: f64) -> (DensityMatrix, usize) {
    let d = ch.dim_b();
    let mut current = start.matrix().vectorize();
    let mut sum = vec![C64::new(0.0, 0.0); d * d];
    let mut n = 0;
    let mut average = start.clone();
    while n < CESARO_FALLBACK_STEPS {
        for (s, c) in sum.iter_mut().zip(&current) {
            *s += c;
        }
        current = m.apply(&current);
        n += 1;
        if n % 1000 == 0 || n == CESARO_FALLBACK_STEPS {
            let avg: Vec<C64> = sum.iter().map(|z| z / n as f64).collect();
            let avg_m = ComplexMatrix::unvectorize(d, &avg).expect("d² entries");
            if let Ok(rho) = DensityMatrix::from_unnormalized(&avg_m) {
                let residual = (&ch.apply_linear(rho.matrix()) - rho.matrix()).frobenius_norm();
                average = rho;
                if residual <= tol {
                    break;
                }
            }
        }
    }
    (average, n)
}

/// Orbit `Φⁿ(ρ₀)` for `n = 0..N` and its running mean.
#[derive(Clone, Debug)]
pub struct CesaroRun {
    pub average: DensityMatrix,
    pub orbit: Vec<DensityMatrix>,
}

pub fn cesaro_iterate(ch: &CtcChannel, rho_b0: &DensityMatrix, n: usize) -> Result<CesaroRun> {
    if n == 0 {
        return Err(Error::Contract("Cesàro iteration needs N ≥ 1".into()));
    }
    ch.check_b(rho_b0)?;
    let mut orbit = Vec::with_capacity(n);
    let mut current = rho_b0.clone();
    let mut sum = ComplexMatrix::zeros(ch.dim_b(), ch.dim_b());
    for k in 0..n {
        sum = &sum + current.matrix();
        let next = if k + 1 < n { Some(ctc_map(ch, &current)?) } else { None };
        orbit.push(current);
        match next {
            Some(x) => current = x,
            None => break,
        }
    }
    let average = DensityMatrix::from_unnormalized(&sum)?;
    Ok(CesaroRun { average, orbit })
}

/// Running mean `(1/N) Σ_{n<N} Φⁿ(ρ₀)` without storing the orbit.
pub fn cesaro_average(ch: &CtcChannel, rho_b0: &DensityMatrix, n: usize) -> Result<DensityMatrix> {
    if n == 0 {
        return Err(Error::Contract("Cesàro iteration needs N ≥ 1".into()));
    }
    ch.check_b(rho_b0)?;
    let m = channel_superoperator(ch);
    let mut current = rho_b0.matrix().vectorize();
    let mut sum = vec![C64::new(0.0, 0.0); current.len()];
    for _ in 0..n {
        for (s, c) in sum.iter_mut().zip(&current) {
            *s += c;
        }
        current = m.apply(&current);
    }
    DensityMatrix::from_unnormalized(&ComplexMatrix::unvectorize(ch.dim_b(), &sum)?)
}

/// Trace-norm residual `‖Φ(ρ_B) − ρ_B‖₁`.
pub fn verify_dctc(ch: &CtcChannel, rho_b: &DensityMatrix) -> Result<f64> {
    ch.check_b(rho_b)?;
    Ok(trace_norm(&(&ch.apply_linear(rho_b.matrix()) - rho_b.matrix())))
}
