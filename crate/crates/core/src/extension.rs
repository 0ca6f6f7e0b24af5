//! Approximate consistency through Cesàro averages of product states.
//!
//! Starting from `φ₁ = ρ_A ⊗ seed`, each step keeps the `A` marginal pinned to
//! `ρ_A` and feeds the evolved `B` marginal back in:
//!
//! ```text
//! φₙ = ρ_A ⊗ Tr_A(U φₙ₋₁ U†)
//! ```
//!
//! The average `ω̃_N = (1/N) Σ φₙ` then satisfies `|ω̃_N(U†bU) − ω̃_N(b)| ≤ 2‖b‖/N`
//! for every observable `b` on `B`.
//!
//! Here a state transforms as `ρ ↦ UρU†`, the Schrödinger picture of the
//! observable map `c ↦ U†cU`. The [`crate::dctc`] map uses the opposite
//! ordering, so the `B` marginals of a sequence built from `U` coincide with the
//! orbit of the channel built from `U†`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigensystem, operator_norm, partial_trace, tensor_product, trace_norm, BipartiteSpace, ComplexMatrix,
    DensityMatrix, Subsystem, UnitaryOperator, C64,
};

/// A density matrix on `H_A ⊗ H_B` together with its factorization.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointState {
    pub space: BipartiteSpace,
    pub rho: DensityMatrix,
}

impl JointState {
    pub fn new(space: BipartiteSpace, rho: DensityMatrix) -> Result<Self> {
        if rho.dim() != space.joint() {
            return Err(Error::Dimension(format!(
                "joint state has dimension {}, expected {}",
                rho.dim(),
                space.joint()
            )));
        }
        Ok(Self { space, rho })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.rho.matrix()
    }
}

/// Restriction to one factor: `A` keeps `Tr_B`, `B` keeps `Tr_A`.
pub fn restrict(s: &JointState, part: Subsystem) -> DensityMatrix {
    let over = match part {
        Subsystem::A => Subsystem::B,
        Subsystem::B => Subsystem::A,
    };
    let m = partial_trace(s.matrix(), s.space, over).expect("joint state dimensions checked at construction");
    DensityMatrix::new(m).expect("marginal of a state is a state")
}

/// `ρ ↦ UρU†`.
pub fn u_transform(s: &JointState, u: &UnitaryOperator) -> Result<JointState> {
    if u.dim() != s.space.joint() {
        return Err(Error::Dimension(format!("unitary has dimension {}, state {}", u.dim(), s.space.joint())));
    }
    Ok(JointState { space: s.space, rho: DensityMatrix::new(u.conjugate(s.matrix()))? })
}

pub fn product_extend(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> JointState {
    let space = BipartiteSpace::new(rho_a.dim(), rho_b.dim()).expect("positive dimensions");
    let m = tensor_product(rho_a.matrix(), rho_b.matrix()).expect("joint dimension within cap");
    JointState { space, rho: DensityMatrix::new(m).expect("product of states is a state") }
}

#[derive(Clone, Debug)]
pub struct ExtensionSequence {
    pub unitary: UnitaryOperator,
    pub rho_a: DensityMatrix,
    pub seed_b: DensityMatrix,
    /// `φ₁, …, φ_N`.
    pub states: Vec<JointState>,
}

impl ExtensionSequence {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn space(&self) -> BipartiteSpace {
        self.states[0].space
    }

    /// `B` marginals of `φ₁, …, φ_N`.
    pub fn b_marginals(&self) -> Vec<DensityMatrix> {
        self.states.iter().map(|s| restrict(s, Subsystem::B)).collect()
    }
}

pub fn build_sequence(
    u: &UnitaryOperator,
    rho_a: &DensityMatrix,
    seed_b: &DensityMatrix,
    n: usize,
) -> Result<ExtensionSequence> {
    if n == 0 {
        return Err(Error::Contract("sequence length must be at least 1".into()));
    }
    let space = BipartiteSpace::new(rho_a.dim(), seed_b.dim())?;
    if u.dim() != space.joint() {
        return Err(Error::Dimension(format!(
            "unitary has dimension {}, expected {}x{}",
            u.dim(),
            space.dim_a,
            space.dim_b
        )));
    }
    let mut states = Vec::with_capacity(n);
    states.push(product_extend(rho_a, seed_b));
    for _ in 1..n {
        let evolved = u_transform(states.last().expect("nonempty"), u)?;
        states.push(product_extend(rho_a, &restrict(&evolved, Subsystem::B)));
    }
    Ok(ExtensionSequence { unitary: u.clone(), rho_a: rho_a.clone(), seed_b: seed_b.clone(), states })
}

/// `ω̃_N = (1/N) Σ_{n=1}^{N} φₙ`.
pub fn average_state(seq: &ExtensionSequence, n: usize) -> Result<JointState> {
    if n == 0 || n > seq.len() {
        return Err(Error::Contract(format!("average over {n} states requested, sequence has {}", seq.len())));
    }
    let d = seq.space().joint();
    let mut sum = ComplexMatrix::zeros(d, d);
    for s in &seq.states[..n] {
        sum = &sum + s.matrix();
    }
    JointState::new(seq.space(), DensityMatrix::new(sum.scale_real(1.0 / n as f64))?)
}

/// Per-observable outcome of the approximate consistency check.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeviationReport {
    pub n: usize,
    pub r: f64,
    /// `δ(b) = |Tr(ω̃_N (U†bU − b))|` per sample.
    pub deltas: Vec<f64>,
    /// `(1/N)|Tr((Uφ_N U† − φ₁)(I ⊗ b))|` per sample.
    pub telescoped: Vec<f64>,
    pub max_delta: f64,
    pub bound: f64,
    pub max_telescoping_gap: f64,
    /// `max |Tr_B ω̃_N − ρ_A|` entrywise.
    pub marginal_residual: f64,
}

impl DeviationReport {
    /// `max δ ≤ 2R/N`, allowing for rounding when the bound is attained.
    pub fn within_bound(&self) -> bool {
        self.max_delta <= self.bound * (1.0 + 1e-12) + 1e-15
    }
}

pub fn deviation_bound_check(
    seq: &ExtensionSequence,
    n: usize,
    b_samples: &[ComplexMatrix],
    r: f64,
) -> Result<DeviationReport> {
    if !(r > 0.0) {
        return Err(Error::Contract(format!("norm bound R must be positive, got {r}")));
    }
    let space = seq.space();
    let omega = average_state(seq, n)?;
    let u = &seq.unitary;
    let first = seq.states[0].matrix();
    let last_evolved = u.conjugate(seq.states[n - 1].matrix());
    let identity_a = ComplexMatrix::identity(space.dim_a);

    let mut deltas = Vec::with_capacity(b_samples.len());
    let mut telescoped = Vec::with_capacity(b_samples.len());
    for (k, b) in b_samples.iter().enumerate() {
        if b.rows() != space.dim_b || b.cols() != space.dim_b {
            return Err(Error::Dimension(format!("sample {k} is {}x{}, expected {}", b.rows(), b.cols(), space.dim_b)));
        }
        let norm = operator_norm(b);
        if norm > r * (1.0 + 1e-12) {
            return Err(Error::Contract(format!("sample {k} has operator norm {norm} above R = {r}")));
        }
        let big_b = tensor_product(&identity_a, b)?;
        let moved = u.conjugate_adjoint(&big_b);
        deltas.push(trace_of_product(omega.matrix(), &(&moved - &big_b)).norm());
        telescoped.push(trace_of_product(&(&last_evolved - first), &big_b).norm() / n as f64);
    }
    let max_delta = deltas.iter().copied().fold(0.0, f64::max);
    let max_telescoping_gap = deltas.iter().zip(&telescoped).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let marginal_residual = restrict(&omega, Subsystem::A).matrix().max_abs_diff(seq.rho_a.matrix());
    Ok(DeviationReport {
        n,
        r,
        deltas,
        telescoped,
        max_delta,
        bound: 2.0 * r / n as f64,
        max_telescoping_gap,
        marginal_residual,
    })
}

fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> C64 {
    let (a, b) = (a.as_nalgebra(), b.as_nalgebra());
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `‖ω̃_{2N} − ω̃_N‖₁`; a convergence diagnostic only.
pub fn cauchy_gap(seq: &ExtensionSequence, n: usize) -> Result<f64> {
    let a = average_state(seq, n)?;
    let b = average_state(seq, 2 * n)?;
    Ok(trace_norm(&(b.matrix() - a.matrix())))
}

/// Partial transpose on the `B` factor.
pub fn partial_transpose(m: &ComplexMatrix, space: BipartiteSpace) -> Result<ComplexMatrix> {
    if m.rows() != space.joint() || m.cols() != space.joint() {
        return Err(Error::Dimension(format!("matrix is {}x{}, expected {}", m.rows(), m.cols(), space.joint())));
    }
    let db = space.dim_b;
    Ok(ComplexMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        let (a1, b1, a2, b2) = (r / db, r % db, c / db, c % db);
        m.get(a1 * db + b2, a2 * db + b1)
    }))
}

/// Smallest eigenvalue of the partial transpose.
pub fn ppt_min_eigenvalue(s: &JointState) -> f64 {
    let pt = partial_transpose(s.matrix(), s.space).expect("joint state dimensions checked at construction");
    hermitian_eigensystem(&pt).expect("partial transpose of a Hermitian matrix is Hermitian").values[0]
}
