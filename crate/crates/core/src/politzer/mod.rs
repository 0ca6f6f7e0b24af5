//! Massless scalar field on 1+1 Minkowski space with the segments
//! `S± = {t = ±τ, |x| ≤ L}` removed and their rims identified crosswise.
//!
//! Everything is computed by exact characteristic tracing: a solution is
//! fixed by its right and left mover profiles on the reference surface
//! `Σ_{t₀}` (`t₀ < −τ`), and its value anywhere is read off after following
//! both characteristics back to that surface.

pub mod field;
pub mod geometry;
pub mod localization;
pub mod movers;
pub mod profile;
pub mod quadrature;
pub mod symplectic;
pub mod trace;

pub use field::{
    evaluate, minkowski_compare, random_admissible_field, rim_check, FieldSpec, MinkowskiComparison, PolitzerField,
    RimCheck,
};
pub use geometry::{lightray_set, Chirality, Direction, NullLine, Point, PolitzerGeometry, DEFAULT_DELTA0};
pub use localization::{localization, regions_equal, wrap_orbit_regions, LocalizationData, SpacetimeRegion, WrapOrbit};
pub use movers::{split_mover_rates, split_movers};
pub use profile::{MoverProfile, ProfileSpec};
pub use symplectic::{symplectic_form, weyl_multiply, WeylElement};
pub use trace::{effective_coordinate, trace_characteristic, trace_until, CharacteristicTrace, Jump, JumpRule};
