use serde::{Deserialize, Serialize};

use super::geometry::{Chirality, Point, PolitzerGeometry, DEFAULT_DELTA0};
use super::profile::{MoverProfile, ProfileSpec};
use super::trace::effective_coordinate;
use crate::error::{Error, Result};
use crate::random::{seeded_rng, uniform};

/// Values closer than this are not counted as a displacement.
pub const DISPLACEMENT_TOL: f64 = 1e-12;
/// Offset from the rims used by [`rim_check`].
pub const RIM_EPSILON: f64 = 1e-6;

/// Massless field on the Politzer geometry, fixed by its mover profiles on `Σ_{t₀}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FieldSpec", into = "FieldSpec")]
pub struct PolitzerField {
    geometry: PolitzerGeometry,
    xi_r: MoverProfile,
    xi_l: MoverProfile,
}

/// `{"tau", "L", "t0", "xiR": {...}, "xiL": {...}}`; a missing profile is zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldSpec {
    pub tau: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub t0: f64,
    #[serde(default = "default_delta0")]
    pub delta0: f64,
    #[serde(rename = "xiR", default)]
    pub xi_r: ProfileSpec,
    #[serde(rename = "xiL", default)]
    pub xi_l: ProfileSpec,
}

fn default_delta0() -> f64 {
    DEFAULT_DELTA0
}

impl TryFrom<FieldSpec> for PolitzerField {
    type Error = Error;
    fn try_from(s: FieldSpec) -> Result<Self> {
        let geom = PolitzerGeometry::with_delta0(s.tau, s.l, s.t0, s.delta0)?;
        PolitzerField::new(
            geom,
            MoverProfile::from_spec(Chirality::R, s.xi_r)?,
            MoverProfile::from_spec(Chirality::L, s.xi_l)?,
        )
    }
}

impl From<PolitzerField> for FieldSpec {
    fn from(f: PolitzerField) -> Self {
        let g = f.geometry;
        FieldSpec {
            tau: g.tau(),
            l: g.l(),
            t0: g.t0(),
            delta0: g.delta0(),
            xi_r: f.xi_r.to_spec(),
            xi_l: f.xi_l.to_spec(),
        }
    }
}

impl PolitzerField {
    /// Checks chiralities and that both profiles vanish near every critical coordinate.
    pub fn new(geometry: PolitzerGeometry, xi_r: MoverProfile, xi_l: MoverProfile) -> Result<Self> {
        if xi_r.chirality() != Chirality::R || xi_l.chirality() != Chirality::L {
            return Err(Error::Contract("xiR must be a right mover and xiL a left mover".into()));
        }
        let w = 2.0 * geometry.delta0();
        for (p, chi) in [(&xi_r, Chirality::R), (&xi_l, Chirality::L)] {
            for c in geometry.critical_coordinates(chi) {
                if !p.vanishes_on(c - w, c + w) {
                    return Err(Error::Contract(format!(
                        "{chi:?} profile does not vanish near the critical coordinate {c}"
                    )));
                }
            }
        }
        Ok(Self { geometry, xi_r, xi_l })
    }

    pub fn zero(geometry: PolitzerGeometry) -> Self {
        Self { geometry, xi_r: MoverProfile::zero(Chirality::R), xi_l: MoverProfile::zero(Chirality::L) }
    }

    pub fn right_mover(geometry: PolitzerGeometry, xi_r: MoverProfile) -> Result<Self> {
        Self::new(geometry, xi_r, MoverProfile::zero(Chirality::L))
    }

    pub fn left_mover(geometry: PolitzerGeometry, xi_l: MoverProfile) -> Result<Self> {
        Self::new(geometry, MoverProfile::zero(Chirality::R), xi_l)
    }

    pub fn geometry(&self) -> &PolitzerGeometry {
        &self.geometry
    }

    pub fn xi_r(&self) -> &MoverProfile {
        &self.xi_r
    }

    pub fn xi_l(&self) -> &MoverProfile {
        &self.xi_l
    }

    pub fn profile(&self, chirality: Chirality) -> &MoverProfile {
        match chirality {
            Chirality::R => &self.xi_r,
            Chirality::L => &self.xi_l,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.xi_r.is_zero() && self.xi_l.is_zero()
    }

    /// Profile-wise sum; both fields must live on the same geometry.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.geometry.same_as(&other.geometry) {
            return Err(Error::Contract("fields live on different geometries".into()));
        }
        Ok(Self { geometry: self.geometry, xi_r: self.xi_r.add(&other.xi_r)?, xi_l: self.xi_l.add(&other.xi_l)? })
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { geometry: self.geometry, xi_r: self.xi_r.scale(c), xi_l: self.xi_l.scale(c) }
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    /// Minkowski solution with the same data on `Σ_{t₀}`.
    pub fn minkowski_value(&self, p: Point) -> f64 {
        self.xi_r.eval(p.t - p.x) + self.xi_l.eval(p.t + p.x)
    }

    pub fn minkowski_time_derivative(&self, p: Point) -> f64 {
        self.xi_r.derivative(p.t - p.x) + self.xi_l.derivative(p.t + p.x)
    }
}

/// `ξ_R(u_eff) + ξ_L(v_eff)` with both coordinates traced back to `Σ_{t₀}`.
pub fn evaluate(field: &PolitzerField, p: Point) -> Result<f64> {
    let g = field.geometry();
    let u = effective_coordinate(g, p, Chirality::R)?;
    let v = effective_coordinate(g, p, Chirality::L)?;
    Ok(field.xi_r.eval(u) + field.xi_l.eval(v))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MinkowskiComparison {
    pub politzer_value: f64,
    pub minkowski_value: f64,
    pub displaced: bool,
}

pub fn minkowski_compare(field: &PolitzerField, p: Point) -> Result<MinkowskiComparison> {
    let politzer_value = evaluate(field, p)?;
    let minkowski_value = field.minkowski_value(p);
    Ok(MinkowskiComparison {
        politzer_value,
        minkowski_value,
        displaced: (politzer_value - minkowski_value).abs() > DISPLACEMENT_TOL,
    })
}

/// Defects of the two rim identifications at one `x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RimCheck {
    pub x: f64,
    /// `φ(τ−ε, x) − φ(−τ+ε, x)` extrapolated to `ε → 0`.
    pub inner: f64,
    /// `φ(−τ−ε, x) − φ(τ+ε, x)` extrapolated to `ε → 0`.
    pub outer: f64,
}

impl RimCheck {
    pub fn max_defect(&self) -> f64 {
        self.inner.abs().max(self.outer.abs())
    }
}

/// Both rim identities at `x`, using `2g(ε) − g(2ε)` to remove the first-order offset.
pub fn rim_check(field: &PolitzerField, x: f64, eps: f64) -> Result<RimCheck> {
    let g = field.geometry();
    if x.abs() > g.l() {
        return Err(Error::Domain(format!("rim sample x = {x} lies outside [-L, L]")));
    }
    if !(eps > 0.0 && 2.0 * eps < g.tau()) {
        return Err(Error::Domain(format!("rim offset {eps} must lie in (0, tau/2)")));
    }
    let tau = g.tau();
    let at = |t: f64| evaluate(field, Point::new(t, x));
    let inner = |e: f64| -> Result<f64> { Ok(at(tau - e)? - at(-tau + e)?) };
    let outer = |e: f64| -> Result<f64> { Ok(at(-tau - e)? - at(tau + e)?) };
    Ok(RimCheck { x, inner: 2.0 * inner(eps)? - inner(2.0 * eps)?, outer: 2.0 * outer(eps)? - outer(2.0 * eps)? })
}

/// Random admissible field: a few smooth bumps per chirality, with the
/// Hermite data cleared on every grid cell near a critical coordinate.
pub fn random_admissible_field(geometry: PolitzerGeometry, seed: u64) -> Result<PolitzerField> {
    let mut rng = seeded_rng(seed);
    let mut build = |chi: Chirality| -> Result<MoverProfile> {
        let crit = geometry.critical_coordinates(chi);
        let lo = crit.first().copied().unwrap_or(-1.0) - 1.0;
        let hi = crit.last().copied().unwrap_or(1.0) + 1.0;
        let bumps: Vec<(f64, f64, f64)> = (0..4)
            .map(|_| {
                let w = uniform(&mut rng, 0.2, 0.8);
                (uniform(&mut rng, lo + w, hi - w), w, uniform(&mut rng, -1.0, 1.0))
            })
            .collect();
        let n = ((hi - lo) / 0.01).ceil() as usize;
        let knots: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let mut values: Vec<f64> =
            knots.iter().map(|&s| bumps.iter().map(|&(c, w, a)| a * bump(s, c, w)).sum()).collect();
        let mut slopes: Vec<f64> =
            knots.iter().map(|&s| bumps.iter().map(|&(c, w, a)| a * bump_derivative(s, c, w)).sum()).collect();
        let win = 2.0 * geometry.delta0();
        for c in &crit {
            for k in 0..n {
                if knots[k + 1] > c - win && knots[k] < c + win {
                    for j in [k, k + 1] {
                        values[j] = 0.0;
                        slopes[j] = 0.0;
                    }
                }
            }
        }
        values[0] = 0.0;
        values[n] = 0.0;
        MoverProfile::with_slopes(chi, knots, values, slopes)
    };
    let xi_r = build(Chirality::R)?;
    let xi_l = build(Chirality::L)?;
    PolitzerField::new(geometry, xi_r, xi_l)
}

/// `(1 − r²)³` on `|r| < 1` with `r = (s − c)/w`.
pub fn bump(s: f64, c: f64, w: f64) -> f64 {
    let r = (s - c) / w;
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - r * r).powi(3)
    }
}

pub fn bump_derivative(s: f64, c: f64, w: f64) -> f64 {
    let r = (s - c) / w;
    if r.abs() >= 1.0 {
        0.0
    } else {
        -6.0 * r * (1.0 - r * r).powi(2) / w
    }
}

/// Uniform sample in `[-L, L]` whose four traces all stay clear of the endpoints.
pub fn sample_rim_x(field: &PolitzerField, rng: &mut crate::random::Rng, eps: f64) -> f64 {
    let g = field.geometry();
    loop {
        let x = uniform(rng, -g.l(), g.l());
        if rim_check(field, x, eps).is_ok() {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse(g: PolitzerGeometry, c: f64, w: f64) -> PolitzerField {
        let knots: Vec<f64> = (0..=200).map(|i| c - w + 2.0 * w * i as f64 / 200.0).collect();
        let p = MoverProfile::from_fn(Chirality::R, knots, |s| bump(s, c, w), |s| bump_derivative(s, c, w)).unwrap();
        PolitzerField::right_mover(g, p).unwrap()
    }

    #[test]
    fn below_strips_matches_minkowski() {
        let g = PolitzerGeometry::new(1.0, 2.0, -4.0).unwrap();
        let f = random_admissible_field(g, 3).unwrap();
        for i in 0..50 {
            let p = Point::new(-1.0 - 0.05 * (i as f64 + 1.0), -3.0 + 0.12 * i as f64);
            let cmp = minkowski_compare(&f, p).unwrap();
            assert_eq!(cmp.politzer_value, cmp.minkowski_value);
            assert!(!cmp.displaced);
        }
    }

    #[test]
    fn outer_jump_displaces_right_pulse() {
        // A pulse centred at u = 0 crosses S₋ from below; above S₊ it reappears at u − 2τ.
        let g = PolitzerGeometry::new(1.0, 3.0, -4.0).unwrap();
        let f = pulse(g, 0.0, 0.4);
        for x in [-0.3, 0.0, 0.2] {
            let p = Point::new(1.5, -0.5 - x);
            let cmp = minkowski_compare(&f, p).unwrap();
            let want = f.xi_r().eval(p.t - p.x - 2.0);
            assert!((cmp.politzer_value - want).abs() < 1e-14);
            assert!(cmp.displaced || cmp.politzer_value.abs() < 1e-12);
        }
    }

    #[test]
    fn spacelike_to_strips_is_not_displaced() {
        let g = PolitzerGeometry::new(1.0, 1.0, -4.0).unwrap();
        let f = pulse(g, -6.0, 0.5);
        // u ≈ −6 rays pass x = 4.5 at t = −1.5, far to the right of both strips.
        for t in [-0.5, 0.0, 0.5, 2.0] {
            let p = Point::new(t, t + 6.0);
            let cmp = minkowski_compare(&f, p).unwrap();
            assert!(!cmp.displaced);
            assert!((cmp.politzer_value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rim_identities_hold_for_random_fields() {
        let g = PolitzerGeometry::new(0.7, 1.6, -2.5).unwrap();
        let f = random_admissible_field(g, 11).unwrap();
        let mut rng = seeded_rng(5);
        for _ in 0..200 {
            let x = sample_rim_x(&f, &mut rng, RIM_EPSILON);
            let r = rim_check(&f, x, RIM_EPSILON).unwrap();
            assert!(r.max_defect() <= 1e-9, "{r:?}");
        }
    }

    #[test]
    fn wave_residual_converges() {
        // Second differences of a sum of movers cancel in exact arithmetic; the
        // residual is dominated by rounding and must stay below C·h².
        let g = PolitzerGeometry::new(1.0, 2.0, -4.0).unwrap();
        let f = random_admissible_field(g, 2).unwrap();
        let p = Point::new(0.31, 0.17);
        for h in [1e-2, 5e-3, 2.5e-3] {
            let at = |dt: f64, dx: f64| evaluate(&f, Point::new(p.t + dt, p.x + dx)).unwrap();
            let box_ = (at(h, 0.0) + at(-h, 0.0) - at(0.0, h) - at(0.0, -h)) / (h * h);
            assert!(box_.abs() <= 10.0 * h * h, "h = {h}: {box_}");
        }
    }

    #[test]
    fn admissibility_is_enforced() {
        let g = PolitzerGeometry::new(1.0, 2.0, -4.0).unwrap();
        // u = −3 is critical: the right ray from Σ_{t₀} meets (−1, 2).
        let knots: Vec<f64> = (0..=40).map(|i| -3.5 + i as f64 * 0.025).collect();
        let p = MoverProfile::from_fn(Chirality::R, knots, |s| bump(s, -3.0, 0.5), |s| bump_derivative(s, -3.0, 0.5))
            .unwrap();
        assert!(PolitzerField::right_mover(g, p).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = PolitzerGeometry::new(1.0, 2.0, -4.0).unwrap();
        let f = pulse(g, 0.0, 0.4);
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"xiR\"") && s.contains("\"L\":2"));
        let back: PolitzerField = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let minimal =
            r#"{"tau":1,"L":2,"t0":-4,"xiR":{"knots":[-0.5,0,0.5],"values":[0,1,0]},"xiL":{"knots":[],"values":[]}}"#;
        let f: PolitzerField = serde_json::from_str(minimal).unwrap();
        assert!(f.xi_l().is_zero());
        assert_eq!(f.xi_r().eval(0.0), 1.0);
    }
}
