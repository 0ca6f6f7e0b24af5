//! Numerical laboratory for Deutsch-style closed-timelike-curve consistency.
//!
//! * [`dctc`]: fixed points of the channel `ρ_B ↦ Tr_A(U†(ρ_A ⊗ ρ_B)U)`.
//! * [`extension`]: averaged product-extension sequences and their deviation bound.
//! * [`correlations`]: the comparable-correlations test on three-party pure states.
//! * [`politzer`]: classical massless field on the two-strip Politzer spacetime.
//! * [`gibbs`]: oscillator Gibbs states on finite-rank projectors as `β → 0`.
//!
//! Shared types live in [`linalg`] and are re-exported at the crate root.

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod correlations;
pub mod dctc;
pub mod error;
pub mod extension;
pub mod gates;
pub mod gibbs;
pub mod linalg;
pub mod politzer;
pub mod random;

pub use error::{Error, Result};
pub use linalg::{
    partial_trace, tensor_product, BipartiteSpace, ComplexMatrix, DensityMatrix, Subsystem, UnitaryOperator, C64,
    DEFAULT_TOL, DIMENSION_CAP,
};
pub use random::{seeded_rng, Rng};

pub use correlations::{verify_lemma, ComparabilityReport, CorrelationInstance, InstanceSpec};
pub use dctc::{solve_fixed_points, verify_dctc, ChannelSpec, CtcChannel, FixedPointResult};
pub use extension::{build_sequence, deviation_bound_check, DeviationReport, ExtensionSequence, JointState};
pub use gibbs::{gibbs_expectation, partition_function, FiniteRankObservable, OscillatorGibbs};
pub use politzer::{PolitzerField, PolitzerGeometry};
