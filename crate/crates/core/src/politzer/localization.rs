//! Cauchy-data support of spacetime regions, traced back to `Σ_{t₀}`.

use serde::{Deserialize, Serialize};

use super::geometry::{Chirality, Point, PolitzerGeometry, CRITICAL_MATCH};
use super::trace::{effective_coordinate, raw_effective_coordinate};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum SpacetimeRegion {
    /// `{t} × [a, b]`.
    Interval {
        t: f64,
        a: f64,
        b: f64,
    },
    /// `[t_min, t_max] × [a, b]`, represented by equally spaced time slices.
    Rectangle {
        #[serde(rename = "tMin")]
        t_min: f64,
        #[serde(rename = "tMax")]
        t_max: f64,
        a: f64,
        b: f64,
    },
    Union {
        parts: Vec<SpacetimeRegion>,
    },
}

/// Constant-time interval `{t} × [a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl SpacetimeRegion {
    pub fn interval(t: f64, a: f64, b: f64) -> Self {
        SpacetimeRegion::Interval { t, a, b }
    }

    /// Interval of half-width `w` centred on `p`.
    pub fn centred(p: Point, w: f64) -> Self {
        SpacetimeRegion::Interval { t: p.t, a: p.x - w, b: p.x + w }
    }

    /// The constant-time intervals that make up the region.
    pub fn intervals(&self) -> Result<Vec<TimeInterval>> {
        let mut out = Vec::new();
        self.collect(&mut out)?;
        if out.is_empty() {
            return Err(Error::Contract("region is empty".into()));
        }
        Ok(out)
    }

    fn collect(&self, out: &mut Vec<TimeInterval>) -> Result<()> {
        match *self {
            SpacetimeRegion::Interval { t, a, b } => {
                check_extent(&[t, a, b], a, b)?;
                out.push(TimeInterval { t, a, b });
            }
            SpacetimeRegion::Rectangle { t_min, t_max, a, b } => {
                check_extent(&[t_min, t_max, a, b], a, b)?;
                if t_max < t_min {
                    return Err(Error::Contract(format!("rectangle has tMax {t_max} < tMin {t_min}")));
                }
                let n = (((t_max - t_min) / (0.5 * (b - a))).ceil() as usize).max(1);
                for k in 0..=n {
                    let t = if k == n { t_max } else { t_min + (t_max - t_min) * k as f64 / n as f64 };
                    out.push(TimeInterval { t, a, b });
                    if t_max == t_min {
                        break;
                    }
                }
            }
            SpacetimeRegion::Union { ref parts } => {
                for p in parts {
                    p.collect(out)?;
                }
            }
        }
        Ok(())
    }

    fn check_slabs(&self, geom: &PolitzerGeometry) -> Result<()> {
        match *self {
            SpacetimeRegion::Rectangle { t_min, t_max, a, b } => {
                let overlaps = a < geom.l() && b > -geom.l();
                for line in [-geom.tau(), geom.tau()] {
                    if overlaps && t_min <= line && line <= t_max {
                        return Err(Error::Ambiguous(format!(
                            "rectangle [{t_min}, {t_max}] x [{a}, {b}] straddles the strip at t = {line}"
                        )));
                    }
                }
                Ok(())
            }
            SpacetimeRegion::Union { ref parts } => parts.iter().try_for_each(|p| p.check_slabs(geom)),
            SpacetimeRegion::Interval { .. } => Ok(()),
        }
    }
}

fn check_extent(values: &[f64], a: f64, b: f64) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("region coordinates must be finite".into()));
    }
    if !(b > a) {
        return Err(Error::Contract(format!("interval [{a}, {b}] is empty")));
    }
    Ok(())
}

/// Unions of open intervals on `Σ_{t₀}` in the `x` coordinate, sorted and disjoint.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LocalizationData {
    pub c_right: Vec<(f64, f64)>,
    pub c_left: Vec<(f64, f64)>,
}

impl LocalizationData {
    pub fn chirality(&self, chi: Chirality) -> &[(f64, f64)] {
        match chi {
            Chirality::R => &self.c_right,
            Chirality::L => &self.c_left,
        }
    }

    /// Same number of intervals with every endpoint within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let same = |a: &[(f64, f64)], b: &[(f64, f64)]| {
            a.len() == b.len() && a.iter().zip(b).all(|(p, q)| (p.0 - q.0).abs() <= tol && (p.1 - q.1).abs() <= tol)
        };
        same(&self.c_right, &other.c_right) && same(&self.c_left, &other.c_left)
    }

    /// The image intervals as a region on `Σ_{t₀}`, one chirality at a time.
    pub fn as_region(&self, geom: &PolitzerGeometry, chi: Chirality) -> SpacetimeRegion {
        SpacetimeRegion::Union {
            parts: self.chirality(chi).iter().map(|&(a, b)| SpacetimeRegion::interval(geom.t0(), a, b)).collect(),
        }
    }
}

/// Normalises a list of open intervals; touching intervals stay separate.
fn normalise(mut v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    v.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.total_cmp(&q.1)));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a < last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

pub fn localization(geom: &PolitzerGeometry, region: &SpacetimeRegion) -> Result<LocalizationData> {
    region.check_slabs(geom)?;
    let intervals = region.intervals()?;
    let mut right = Vec::new();
    let mut left = Vec::new();
    for iv in &intervals {
        if iv.t.abs() == geom.tau() && iv.a < geom.l() && iv.b > -geom.l() {
            return Err(Error::Ambiguous(format!(
                "interval [{}, {}] at t = {} meets a removed segment",
                iv.a, iv.b, iv.t
            )));
        }
        right.extend(image_pieces(geom, iv, Chirality::R)?);
        left.extend(image_pieces(geom, iv, Chirality::L)?);
    }
    Ok(LocalizationData { c_right: normalise(right), c_left: normalise(left) })
}

/// Back-traced images of one interval, split wherever a critical ray crosses it.
fn image_pieces(geom: &PolitzerGeometry, iv: &TimeInterval, chi: Chirality) -> Result<Vec<(f64, f64)>> {
    let critical = geom.critical_coordinates(chi);
    let two_tau = 2.0 * geom.tau();
    let j_max = ((geom.l() + iv.a.abs().max(iv.b.abs())) / two_tau).ceil() as i64 + 3;
    let tol = CRITICAL_MATCH * geom.l().max(1.0);
    let is_critical = |c: f64| critical.iter().any(|k| (k - c).abs() <= tol);

    // Points where the raw coordinate plus some admissible shift is critical.
    let mut cuts: Vec<f64> = Vec::new();
    for &c in &critical {
        for j in -j_max..=j_max {
            let x = chi.position_at(c - two_tau * j as f64, iv.t);
            if x > iv.a + tol && x < iv.b - tol {
                cuts.push(x);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|p, q| (*p - *q).abs() <= tol);

    let mut bounds = Vec::with_capacity(cuts.len() + 2);
    bounds.push(iv.a);
    bounds.extend(&cuts);
    bounds.push(iv.b);
    let mut shifts = Vec::with_capacity(bounds.len() - 1);
    for w in bounds.windows(2) {
        let mid = Point::new(iv.t, 0.5 * (w[0] + w[1]));
        shifts.push(raw_effective_coordinate(geom, mid, chi)? - chi.coordinate(mid));
    }

    // Keep a cut only if the ray through it is critical on either side.
    let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
    let mut start = iv.a;
    for (k, &x) in cuts.iter().enumerate() {
        let c = chi.coordinate(Point::new(iv.t, x));
        let kept = is_critical(c + shifts[k]) || is_critical(c + shifts[k + 1]);
        if kept || shifts[k] != shifts[k + 1] {
            pieces.push((start, x, shifts[k]));
            start = x;
        }
    }
    pieces.push((start, iv.b, *shifts.last().unwrap()));

    Ok(pieces
        .into_iter()
        .map(|(a, b, s)| {
            let img = |x: f64| chi.position_at(chi.coordinate(Point::new(iv.t, x)) + s, geom.t0());
            let (p, q) = (img(a), img(b));
            (p.min(q), p.max(q))
        })
        .collect())
}

/// Whether both regions have the same localization data up to `tol` per endpoint.
pub fn regions_equal(geom: &PolitzerGeometry, r1: &SpacetimeRegion, r2: &SpacetimeRegion, tol: f64) -> Result<bool> {
    Ok(localization(geom, r1)?.approx_eq(&localization(geom, r2)?, tol))
}

/// Intervals inside the CTC region that share the seed's traced coordinates,
/// together with one control interval off the orbit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WrapOrbit {
    pub seed: SpacetimeRegion,
    pub orbit: Vec<SpacetimeRegion>,
    pub control: SpacetimeRegion,
}

/// Intersections of the seed's right and left characteristic chains inside
/// `|t| < τ, |x| ≤ L`, each carrying an interval of half-width `w`.
pub fn wrap_orbit_regions(geom: &PolitzerGeometry, seed: Point, w: f64) -> Result<WrapOrbit> {
    let inside = |p: Point| p.t.abs() < geom.tau() && p.x.abs() + w <= geom.l();
    if !(w > 0.0) || !inside(seed) {
        return Err(Error::Domain(format!(
            "seed ({}, {}) with half-width {w} is not inside the CTC region",
            seed.t, seed.x
        )));
    }
    let u_eff = effective_coordinate(geom, seed, Chirality::R)?;
    let v_eff = effective_coordinate(geom, seed, Chirality::L)?;
    let (u0, v0) = (Chirality::R.coordinate(seed), Chirality::L.coordinate(seed));
    let two_tau = 2.0 * geom.tau();
    let j_max = (geom.l() / geom.tau()).ceil() as i64 + 2;
    let tol = CRITICAL_MATCH * geom.l().max(1.0);
    let mut orbit = Vec::new();
    for j in -j_max..=j_max {
        for l in -j_max..=j_max {
            if j == 0 && l == 0 {
                continue;
            }
            let (u, v) = (u0 - two_tau * j as f64, v0 - two_tau * l as f64);
            let p = Point::new(0.5 * (u + v), 0.5 * (v - u));
            if !inside(p) {
                continue;
            }
            let (Ok(pu), Ok(pv)) =
                (effective_coordinate(geom, p, Chirality::R), effective_coordinate(geom, p, Chirality::L))
            else {
                continue;
            };
            if (pu - u_eff).abs() <= tol && (pv - v_eff).abs() <= tol {
                orbit.push(SpacetimeRegion::centred(p, w));
            }
        }
    }
    orbit.sort_by(|p, q| match (p, q) {
        (SpacetimeRegion::Interval { t: t1, a: a1, .. }, SpacetimeRegion::Interval { t: t2, a: a2, .. }) => {
            t1.total_cmp(t2).then(a1.total_cmp(a2))
        }
        _ => std::cmp::Ordering::Equal,
    });
    // Moving along the left ray by τ changes u and nothing else.
    let control = Point::new(seed.t + 0.5 * geom.tau(), seed.x - 0.5 * geom.tau());
    let control =
        if inside(control) { control } else { Point::new(seed.t - 0.5 * geom.tau(), seed.x + 0.5 * geom.tau()) };
    Ok(WrapOrbit { seed: SpacetimeRegion::centred(seed, w), orbit, control: SpacetimeRegion::centred(control, w) })
}
