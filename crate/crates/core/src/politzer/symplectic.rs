use num_complex::Complex64;

use super::field::PolitzerField;
use super::geometry::{Chirality, Point};
use super::quadrature::{integrate_piecewise, SIMPSON_TOL};
use crate::error::{Error, Result};

/// Unit-modulus tolerance for Weyl phases.
pub const PHASE_TOL: f64 = 1e-12;

/// `∫ (∂ₜf · g − f · ∂ₜg) dx` over the surface `t = t_surface` below both strips.
pub fn symplectic_form(f: &PolitzerField, g: &PolitzerField, t_surface: f64) -> Result<f64> {
    if !f.geometry().same_as(g.geometry()) {
        return Err(Error::Contract("fields live on different geometries".into()));
    }
    if !(t_surface < -f.geometry().tau()) || !t_surface.is_finite() {
        return Err(Error::Domain(format!(
            "surface t = {t_surface} is not below the strips (t < {})",
            -f.geometry().tau()
        )));
    }
    let mut breaks = Vec::new();
    for field in [f, g] {
        breaks.extend(field.xi_r().knots().iter().map(|k| Chirality::R.position_at(*k, t_surface)));
        breaks.extend(field.xi_l().knots().iter().map(|k| Chirality::L.position_at(*k, t_surface)));
    }
    let integrand = |x: f64| {
        let p = Point::new(t_surface, x);
        f.minkowski_time_derivative(p) * g.minkowski_value(p) - f.minkowski_value(p) * g.minkowski_time_derivative(p)
    };
    Ok(integrate_piecewise(&integrand, &breaks, SIMPSON_TOL))
}

/// Weyl generator `phase · w(field)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylElement {
    phase: Complex64,
    field: PolitzerField,
}

impl WeylElement {
    pub fn new(phase: Complex64, field: PolitzerField) -> Result<Self> {
        if (phase.norm() - 1.0).abs() > PHASE_TOL {
            return Err(Error::Contract(format!("Weyl phase has modulus {}", phase.norm())));
        }
        Ok(Self { phase, field })
    }

    pub fn generator(field: PolitzerField) -> Self {
        Self { phase: Complex64::new(1.0, 0.0), field }
    }

    pub fn phase(&self) -> Complex64 {
        self.phase
    }

    pub fn field(&self) -> &PolitzerField {
        &self.field
    }

    /// `w(φ)* = w(−φ)` with conjugated phase.
    pub fn adjoint(&self) -> Self {
        Self { phase: self.phase.conj(), field: self.field.neg() }
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.field.is_zero() && (self.phase - 1.0).norm() <= tol
    }
}

/// `w(f)·w(g) = e^{iσ(f,g)/2} w(f+g)`, carrying the phases along.
pub fn weyl_multiply(w1: &WeylElement, w2: &WeylElement, t_surface: f64) -> Result<WeylElement> {
    let sigma = symplectic_form(&w1.field, &w2.field, t_surface)?;
    let phase = w1.phase * w2.phase * Complex64::from_polar(1.0, 0.5 * sigma);
    // Renormalise so that long products keep |phase| = 1 exactly.
    let phase = phase / phase.norm();
    Ok(WeylElement { phase, field: w1.field.add(&w2.field)? })
}
