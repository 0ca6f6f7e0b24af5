use serde::{Deserialize, Serialize};

use super::geometry::{Band, Chirality, Direction, Point, PolitzerGeometry};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum JumpRule {
    /// Between the inner rims: `(−τ⁺, x) ↔ (τ⁻, x)`.
    InnerWrap,
    /// Between the outer rims: `(τ⁺, x) ↔ (−τ⁻, x)`.
    OuterJump,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub from: Point,
    pub to: Point,
    pub rule: JumpRule,
}

/// Piecewise null path produced by following one characteristic.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicTrace {
    pub chirality: Chirality,
    pub direction: Direction,
    /// Straight null segments; consecutive ones are joined by one jump.
    pub segments: Vec<(Point, Point)>,
    pub jumps: Vec<Jump>,
    pub terminal: Point,
    /// Net change of the characteristic coordinate along the path.
    pub shift: f64,
}

impl CharacteristicTrace {
    pub fn wraps(&self) -> usize {
        self.jumps.iter().filter(|j| j.rule == JumpRule::InnerWrap).count()
    }

    pub fn outer_jumps(&self) -> usize {
        self.jumps.iter().filter(|j| j.rule == JumpRule::OuterJump).count()
    }

    /// Characteristic coordinate of the terminal point.
    pub fn terminal_coordinate(&self) -> f64 {
        self.chirality.coordinate(self.terminal)
    }
}

/// Backward traces end on `Σ_{t₀}`, forward traces at [`PolitzerGeometry::horizon`].
pub fn trace_characteristic(
    geom: &PolitzerGeometry,
    p: Point,
    chirality: Chirality,
    direction: Direction,
) -> Result<CharacteristicTrace> {
    let end = match direction {
        Direction::Backward => geom.t0(),
        Direction::Forward => geom.horizon(),
    };
    trace_until(geom, p, chirality, direction, end, geom.delta0())
}

/// As [`trace_characteristic`] with an explicit end time and exclusion width.
///
/// With `delta0 = 0` no crossing is rejected and a crossing exactly at
/// `|x| = L` counts as inside the strip.
pub fn trace_until(
    geom: &PolitzerGeometry,
    p: Point,
    chirality: Chirality,
    direction: Direction,
    end: f64,
    delta0: f64,
) -> Result<CharacteristicTrace> {
    if !p.t.is_finite() || !p.x.is_finite() {
        return Err(Error::Domain(format!("point ({}, {}) is not finite", p.t, p.x)));
    }
    if geom.in_strip(p) {
        return Err(Error::Domain(format!("point ({}, {}) lies on a removed segment", p.t, p.x)));
    }
    let (tau, l) = (geom.tau(), geom.l());
    let vel = chirality.velocity();
    let backward = direction == Direction::Backward;
    // The band a trace enters from `p`; the rims at t = ±τ outside the strip
    // belong to the slab the trace moves into.
    let mut band = if p.t > tau || (p.t == tau && !backward) {
        Band::Above
    } else if p.t > -tau || (p.t == -tau && !backward) {
        Band::Middle
    } else {
        Band::Below
    };
    let (mut t, mut x) = (p.t, p.x);
    let mut start = p;
    let mut segments = Vec::new();
    let mut jumps = Vec::new();
    let mut shift = 0.0;

    // Outside the slab structure a single straight segment reaches `end`.
    let heading_past_strips = if backward { end > t } else { end < t };
    if heading_past_strips && ((backward && band != Band::Below) || (!backward && band != Band::Above)) {
        return Err(Error::Contract(format!("end time {end} lies on the wrong side of the strips")));
    }

    loop {
        let line = if heading_past_strips {
            None
        } else if backward {
            match band {
                Band::Above => Some(tau),
                Band::Middle => Some(-tau),
                Band::Below => None,
            }
        } else {
            match band {
                Band::Below => Some(-tau),
                Band::Middle => Some(tau),
                Band::Above => None,
            }
        };
        let line = match line {
            Some(line) if (backward && line > end) || (!backward && line < end) => line,
            _ => {
                let terminal = Point::new(end, x + vel * (end - t));
                segments.push((start, terminal));
                return Ok(CharacteristicTrace { chirality, direction, segments, jumps, terminal, shift });
            }
        };
        let xc = x + vel * (line - t);
        let margin = xc.abs() - l;
        if delta0 > 0.0 && margin.abs() < delta0 {
            return Err(Error::CriticalRay(format!(
                "characteristic through ({}, {}) passes within {:e} of the strip endpoint ({line}, {})",
                p.t,
                p.x,
                margin.abs(),
                l.copysign(xc)
            )));
        }
        let crossing = Point::new(line, xc);
        let inside = margin <= 0.0;
        if inside {
            let (rule, to, next_band, dshift) = match (backward, band) {
                (true, Band::Above) => (JumpRule::OuterJump, Point::new(-tau, xc), Band::Below, -2.0 * tau),
                (true, Band::Middle) => (JumpRule::InnerWrap, Point::new(tau, xc), Band::Middle, 2.0 * tau),
                (false, Band::Below) => (JumpRule::OuterJump, Point::new(tau, xc), Band::Above, 2.0 * tau),
                (false, Band::Middle) => (JumpRule::InnerWrap, Point::new(-tau, xc), Band::Middle, -2.0 * tau),
                _ => unreachable!("no crossing line in this band"),
            };
            segments.push((start, crossing));
            jumps.push(Jump { from: crossing, to, rule });
            start = to;
            band = next_band;
            t = to.t;
            x = to.x;
            shift += dshift;
        } else {
            band = match (backward, band) {
                (true, Band::Above) => Band::Middle,
                (true, Band::Middle) => Band::Below,
                (false, Band::Below) => Band::Middle,
                (false, Band::Middle) => Band::Above,
                _ => unreachable!("no crossing line in this band"),
            };
            t = line;
            x = xc;
        }
        if jumps.len() > 1_000_000 {
            return Err(Error::Solver("characteristic does not leave the strip region".into()));
        }
    }
}

/// Characteristic coordinate on `Σ_{t₀}` of the solution through `p`.
pub fn effective_coordinate(geom: &PolitzerGeometry, p: Point, chirality: Chirality) -> Result<f64> {
    let trace = trace_characteristic(geom, p, chirality, Direction::Backward)?;
    Ok(chirality.coordinate(p) + trace.shift)
}

/// Same as [`effective_coordinate`] without the endpoint exclusion.
pub(crate) fn raw_effective_coordinate(geom: &PolitzerGeometry, p: Point, chirality: Chirality) -> Result<f64> {
    let trace = trace_until(geom, p, chirality, Direction::Backward, geom.t0(), 0.0)?;
    Ok(chirality.coordinate(p) + trace.shift)
}
