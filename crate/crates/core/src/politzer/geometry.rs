use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default exclusion width around the strip endpoints, in characteristic coordinates.
pub const DEFAULT_DELTA0: f64 = 1e-6;
/// Matching tolerance used when a coordinate is compared with a critical value.
pub(crate) const CRITICAL_MATCH: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chirality {
    /// Right mover, constant along `u = t − x`.
    R,
    /// Left mover, constant along `v = t + x`.
    L,
}

impl Chirality {
    /// `dx/dt` along the characteristic.
    pub fn velocity(self) -> f64 {
        match self {
            Chirality::R => 1.0,
            Chirality::L => -1.0,
        }
    }

    /// `u = t − x` or `v = t + x`.
    pub fn coordinate(self, p: Point) -> f64 {
        match self {
            Chirality::R => p.t - p.x,
            Chirality::L => p.t + p.x,
        }
    }

    /// Position at time `t` on the line with characteristic coordinate `c`.
    pub fn position_at(self, c: f64, t: f64) -> f64 {
        match self {
            Chirality::R => t - c,
            Chirality::L => c - t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub t: f64,
    pub x: f64,
}

impl Point {
    pub fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }
}

/// Minkowski plane with the segments `S± = {t = ±τ, |x| ≤ L}` cut out and
/// their rims glued crosswise, anchored to the surface `t = t₀ < −τ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GeometrySpec", into = "GeometrySpec")]
pub struct PolitzerGeometry {
    tau: f64,
    l: f64,
    t0: f64,
    delta0: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GeometrySpec {
    pub tau: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub t0: f64,
    #[serde(default = "default_delta0")]
    pub delta0: f64,
}

fn default_delta0() -> f64 {
    DEFAULT_DELTA0
}

impl TryFrom<GeometrySpec> for PolitzerGeometry {
    type Error = Error;
    fn try_from(s: GeometrySpec) -> Result<Self> {
        PolitzerGeometry::with_delta0(s.tau, s.l, s.t0, s.delta0)
    }
}

impl From<PolitzerGeometry> for GeometrySpec {
    fn from(g: PolitzerGeometry) -> Self {
        GeometrySpec { tau: g.tau, l: g.l, t0: g.t0, delta0: g.delta0 }
    }
}

impl PolitzerGeometry {
    pub fn new(tau: f64, l: f64, t0: f64) -> Result<Self> {
        Self::with_delta0(tau, l, t0, DEFAULT_DELTA0)
    }

    pub fn with_delta0(tau: f64, l: f64, t0: f64, delta0: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("tau must be positive, got {tau}")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Domain(format!("L must be positive, got {l}")));
        }
        if !(t0 < -tau && t0.is_finite()) {
            return Err(Error::Domain(format!("t0 must lie below -tau = {}, got {t0}", -tau)));
        }
        if !(delta0 >= 0.0 && delta0 < tau.min(l)) {
            return Err(Error::Domain(format!("delta0 = {delta0} must lie in [0, min(tau, L))")));
        }
        Ok(Self { tau, l, t0, delta0 })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn delta0(&self) -> f64 {
        self.delta0
    }

    /// Default end time of forward traces, the mirror image `−t₀` of the anchor surface.
    pub fn horizon(&self) -> f64 {
        -self.t0
    }

    /// Whether `p` lies on one of the removed segments.
    pub fn in_strip(&self, p: Point) -> bool {
        (p.t == self.tau || p.t == -self.tau) && p.x.abs() <= self.l
    }

    /// Strictly inside `P_CTC = {|t| < τ, |x| ≤ L}`.
    pub fn in_ctc_region(&self, p: Point) -> bool {
        p.t.abs() < self.tau && p.x.abs() <= self.l
    }

    pub fn endpoints(&self) -> [Point; 4] {
        [
            Point::new(self.tau, self.l),
            Point::new(self.tau, -self.l),
            Point::new(-self.tau, self.l),
            Point::new(-self.tau, -self.l),
        ]
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self == other
    }

    /// Characteristic coordinates on `Σ_{t₀}` whose solutions run into a strip endpoint.
    ///
    /// Candidates are the endpoint coordinates shifted by multiples of `2τ`;
    /// each is kept only if the forward trace from `Σ_{t₀}` actually meets an
    /// endpoint. The result is sorted.
    pub fn critical_coordinates(&self, chirality: Chirality) -> Vec<f64> {
        let k_max = (self.l / self.tau).ceil() as i64 + 2;
        let mut out: Vec<f64> = Vec::new();
        for e in self.endpoints() {
            let base = chirality.coordinate(e);
            for k in -k_max..=k_max {
                let c = base + 2.0 * self.tau * k as f64;
                if forward_hits_endpoint(self, chirality, c) {
                    out.push(c);
                }
            }
        }
        out.sort_by(|a, b| a.total_cmp(b));
        out.dedup_by(|a, b| (*a - *b).abs() <= CRITICAL_MATCH);
        out
    }
}

/// Which slab a point belongs to for tracing purposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Band {
    Above,
    Middle,
    Below,
}

/// Follows the solution emanating from `Σ_{t₀}` with coordinate `c` through
/// every identification and reports whether a crossing lands on `|x| = L`.
fn forward_hits_endpoint(g: &PolitzerGeometry, chirality: Chirality, c: f64) -> bool {
    let tol = CRITICAL_MATCH * g.l.max(1.0);
    let v = chirality.velocity();
    let (mut band, mut t, mut x) = (Band::Below, g.t0, chirality.position_at(c, g.t0));
    let mut guard = 0;
    loop {
        let line = match band {
            Band::Below => -g.tau,
            Band::Middle => g.tau,
            Band::Above => return false,
        };
        let xc = x + v * (line - t);
        if (xc.abs() - g.l).abs() <= tol {
            return true;
        }
        let inside = xc.abs() < g.l;
        t = line;
        x = xc;
        band = match (band, inside) {
            (Band::Below, true) => {
                t = g.tau;
                Band::Above
            }
            (Band::Below, false) => Band::Middle,
            (Band::Middle, true) => {
                t = -g.tau;
                Band::Middle
            }
            (Band::Middle, false) => Band::Above,
            (Band::Above, _) => unreachable!(),
        };
        guard += 1;
        if guard > 10_000 {
            return false;
        }
    }
}

/// One of the eight Minkowski null lines through a strip endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullLine {
    pub chirality: Chirality,
    /// `u = t* − x*` for right rays, `v = t* + x*` for left rays.
    pub coordinate: f64,
    pub through: Point,
}

/// The right and left rays through each of `(±τ, ±L)`.
pub fn lightray_set(geom: &PolitzerGeometry) -> Vec<NullLine> {
    let mut out = Vec::with_capacity(8);
    for e in geom.endpoints() {
        for chirality in [Chirality::R, Chirality::L] {
            out.push(NullLine { chirality, coordinate: chirality.coordinate(e), through: e });
        }
    }
    out
}
