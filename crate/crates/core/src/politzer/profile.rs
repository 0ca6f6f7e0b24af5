use serde::{Deserialize, Serialize};

use super::geometry::Chirality;
use crate::error::{Error, Result};

/// Tolerance for the compact-support and zero-mean checks.
const VANISH_TOL: f64 = 1e-12;

/// Compactly supported mover profile, a `C¹` piecewise cubic Hermite interpolant.
///
/// Slopes default to centred differences with zero slope at both ends. An
/// empty knot list is the zero profile.
#[derive(Clone, Debug, PartialEq)]
pub struct MoverProfile {
    chirality: Chirality,
    knots: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
    derivative_of_compact_support: bool,
}

/// Wire form `{"knots": [...], "values": [...]}` with optional explicit slopes.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub knots: Vec<f64>,
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slopes: Option<Vec<f64>>,
    #[serde(rename = "derivativeOfCompactSupport", default, skip_serializing_if = "std::ops::Not::not")]
    pub derivative_of_compact_support: bool,
}

impl MoverProfile {
    pub fn zero(chirality: Chirality) -> Self {
        Self { chirality, knots: vec![], values: vec![], slopes: vec![], derivative_of_compact_support: false }
    }

    pub fn new(chirality: Chirality, knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_grid(&knots, &values)?;
        let slopes = centred_slopes(&knots, &values);
        Self::with_slopes(chirality, knots, values, slopes)
    }

    pub fn with_slopes(chirality: Chirality, knots: Vec<f64>, values: Vec<f64>, slopes: Vec<f64>) -> Result<Self> {
        check_grid(&knots, &values)?;
        if slopes.len() != knots.len() {
            return Err(Error::Dimension(format!("{} slopes for {} knots", slopes.len(), knots.len())));
        }
        if slopes.iter().any(|s| !s.is_finite()) {
            return Err(Error::Contract("profile slopes must be finite".into()));
        }
        if let (Some(first), Some(last)) = (values.first(), values.last()) {
            let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if first.abs() > VANISH_TOL * scale || last.abs() > VANISH_TOL * scale {
                return Err(Error::Contract("profile must vanish at both grid endpoints".into()));
            }
        }
        let mut values = values;
        if let Some(v) = values.first_mut() {
            *v = 0.0;
        }
        if let Some(v) = values.last_mut() {
            *v = 0.0;
        }
        Ok(Self { chirality, knots, values, slopes, derivative_of_compact_support: false })
    }

    /// Samples `f` and `df` on `knots`.
    pub fn from_fn(
        chirality: Chirality,
        knots: Vec<f64>,
        f: impl Fn(f64) -> f64,
        df: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let values = knots.iter().map(|&k| f(k)).collect();
        let slopes = knots.iter().map(|&k| df(k)).collect();
        Self::with_slopes(chirality, knots, values, slopes)
    }

    pub fn from_spec(chirality: Chirality, spec: ProfileSpec) -> Result<Self> {
        let p = match spec.slopes {
            Some(s) => Self::with_slopes(chirality, spec.knots, spec.values, s)?,
            None => Self::new(chirality, spec.knots, spec.values)?,
        };
        if spec.derivative_of_compact_support {
            p.require_zero_mean()
        } else {
            Ok(p)
        }
    }

    pub fn to_spec(&self) -> ProfileSpec {
        ProfileSpec {
            knots: self.knots.clone(),
            values: self.values.clone(),
            slopes: Some(self.slopes.clone()),
            derivative_of_compact_support: self.derivative_of_compact_support,
        }
    }

    /// Flags the profile as the derivative of a compactly supported function.
    pub fn require_zero_mean(mut self) -> Result<Self> {
        let total = self.integral();
        let scale = self.abs_integral_bound().max(f64::MIN_POSITIVE);
        if total.abs() > 1e-10 * scale.max(1.0) {
            return Err(Error::Contract(format!("profile integral {total:e} is not zero")));
        }
        self.derivative_of_compact_support = true;
        Ok(self)
    }

    pub fn chirality(&self) -> Chirality {
        self.chirality
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn derivative_of_compact_support(&self) -> bool {
        self.derivative_of_compact_support
    }

    pub fn support(&self) -> Option<(f64, f64)> {
        Some((*self.knots.first()?, *self.knots.last()?))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().chain(&self.slopes).all(|v| *v == 0.0)
    }

    fn locate(&self, s: f64) -> Option<(usize, f64, f64)> {
        let (a, b) = self.support()?;
        if !(s >= a && s <= b) || self.knots.len() < 2 {
            return None;
        }
        let k = match self.knots.partition_point(|&k| k <= s) {
            0 => 0,
            n if n >= self.knots.len() => self.knots.len() - 2,
            n => n - 1,
        };
        let h = self.knots[k + 1] - self.knots[k];
        Some((k, h, (s - self.knots[k]) / h))
    }

    pub fn eval(&self, s: f64) -> f64 {
        let Some((k, h, r)) = self.locate(s) else {
            return 0.0;
        };
        let (r2, r3) = (r * r, r * r * r);
        let h00 = 2.0 * r3 - 3.0 * r2 + 1.0;
        let h10 = r3 - 2.0 * r2 + r;
        let h01 = -2.0 * r3 + 3.0 * r2;
        let h11 = r3 - r2;
        h00 * self.values[k] + h10 * h * self.slopes[k] + h01 * self.values[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, s: f64) -> f64 {
        let Some((k, h, r)) = self.locate(s) else {
            return 0.0;
        };
        let r2 = r * r;
        let d00 = (6.0 * r2 - 6.0 * r) / h;
        let d10 = 3.0 * r2 - 4.0 * r + 1.0;
        let d01 = (-6.0 * r2 + 6.0 * r) / h;
        let d11 = 3.0 * r2 - 2.0 * r;
        d00 * self.values[k] + d10 * self.slopes[k] + d01 * self.values[k + 1] + d11 * self.slopes[k + 1]
    }

    /// Exact integral of the interpolant over its support.
    pub fn integral(&self) -> f64 {
        self.knots
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let h = w[1] - w[0];
                0.5 * h * (self.values[k] + self.values[k + 1]) + h * h * (self.slopes[k] - self.slopes[k + 1]) / 12.0
            })
            .sum()
    }

    /// Exact running integral at every knot, starting from zero.
    pub fn cumulative_integral(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.knots.len());
        let mut acc = 0.0;
        out.extend(self.knots.first().map(|_| 0.0));
        for (k, w) in self.knots.windows(2).enumerate() {
            let h = w[1] - w[0];
            acc +=
                0.5 * h * (self.values[k] + self.values[k + 1]) + h * h * (self.slopes[k] - self.slopes[k + 1]) / 12.0;
            out.push(acc);
        }
        out
    }

    fn abs_integral_bound(&self) -> f64 {
        self.knots
            .windows(2)
            .enumerate()
            .map(|(k, w)| {
                let h = w[1] - w[0];
                h * (self.values[k].abs()
                    + self.values[k + 1].abs()
                    + h * (self.slopes[k].abs() + self.slopes[k + 1].abs()))
            })
            .sum()
    }

    /// Whether the profile is identically zero on `[a, b]`.
    pub fn vanishes_on(&self, a: f64, b: f64) -> bool {
        let Some((lo, hi)) = self.support() else {
            return true;
        };
        if b <= lo || a >= hi {
            return true;
        }
        for (k, w) in self.knots.windows(2).enumerate() {
            if w[1] <= a || w[0] >= b {
                continue;
            }
            let zero =
                [self.values[k], self.values[k + 1], self.slopes[k], self.slopes[k + 1]].iter().all(|v| *v == 0.0);
            if !zero {
                return false;
            }
        }
        true
    }

    /// Sum on the merged knot set; exact because both summands are cubic on every merged cell.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.chirality != other.chirality {
            return Err(Error::Contract("cannot add profiles of different chirality".into()));
        }
        if self.knots.is_empty() {
            return Ok(other.clone());
        }
        if other.knots.is_empty() {
            return Ok(self.clone());
        }
        let mut knots: Vec<f64> = self.knots.iter().chain(&other.knots).copied().collect();
        knots.sort_by(f64::total_cmp);
        knots.dedup();
        let values = knots.iter().map(|&s| self.eval_at_knot(s) + other.eval_at_knot(s)).collect();
        let slopes = knots.iter().map(|&s| self.slope_at_knot(s) + other.slope_at_knot(s)).collect();
        let mut sum = Self::with_slopes(self.chirality, knots, values, slopes)?;
        sum.derivative_of_compact_support = self.derivative_of_compact_support && other.derivative_of_compact_support;
        Ok(sum)
    }

    // Knot values are taken verbatim so that sums reproduce inputs exactly.
    fn eval_at_knot(&self, s: f64) -> f64 {
        match self.knots.binary_search_by(|k| k.total_cmp(&s)) {
            Ok(i) => self.values[i],
            Err(_) => self.eval(s),
        }
    }

    fn slope_at_knot(&self, s: f64) -> f64 {
        match self.knots.binary_search_by(|k| k.total_cmp(&s)) {
            Ok(i) => self.slopes[i],
            Err(_) => self.derivative(s),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out.slopes.iter_mut().for_each(|v| *v *= c);
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }
}

fn check_grid(knots: &[f64], values: &[f64]) -> Result<()> {
    if knots.len() != values.len() {
        return Err(Error::Dimension(format!("{} knots but {} values", knots.len(), values.len())));
    }
    if knots.len() == 1 {
        return Err(Error::Contract("a profile needs at least two knots".into()));
    }
    if knots.iter().chain(values).any(|v| !v.is_finite()) {
        return Err(Error::Contract("profile data must be finite".into()));
    }
    if knots.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract("profile knots must be strictly increasing".into()));
    }
    Ok(())
}

fn centred_slopes(knots: &[f64], values: &[f64]) -> Vec<f64> {
    let n = knots.len();
    (0..n)
        .map(
            |i| {
                if i == 0 || i + 1 == n {
                    0.0
                } else {
                    (values[i + 1] - values[i - 1]) / (knots[i + 1] - knots[i - 1])
                }
            },
        )
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::politzer::quadrature::gauss_legendre;

    fn bump(c: f64, w: f64) -> (impl Fn(f64) -> f64, impl Fn(f64) -> f64) {
        let f = move |s: f64| {
            let r = (s - c) / w;
            if r.abs() >= 1.0 {
                0.0
            } else {
                (1.0 - r * r).powi(3)
            }
        };
        let df = move |s: f64| {
            let r = (s - c) / w;
            if r.abs() >= 1.0 {
                0.0
            } else {
                -6.0 * r * (1.0 - r * r).powi(2) / w
            }
        };
        (f, df)
    }

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
    }

    #[test]
    fn interpolates_knots_and_vanishes_outside() {
        let (f, df) = bump(0.0, 1.0);
        let p = MoverProfile::from_fn(Chirality::R, grid(-1.0, 1.0, 40), &f, &df).unwrap();
        for &k in p.knots() {
            assert_eq!(p.eval(k), f(k));
        }
        assert_eq!(p.eval(-1.5), 0.0);
        assert_eq!(p.eval(1.0 + 1e-12), 0.0);
        for i in 0..100 {
            let s = -1.0 + 2.0 * (i as f64 + 0.3) / 100.0;
            assert!((p.eval(s) - f(s)).abs() < 1e-5);
            assert!((p.derivative(s) - df(s)).abs() < 1e-3);
        }
    }

    #[test]
    fn exact_integral_matches_gauss_legendre() {
        let p =
            MoverProfile::new(Chirality::L, vec![0.0, 0.3, 0.7, 1.2, 2.0], vec![0.0, 1.0, -0.5, 0.25, 0.0]).unwrap();
        let oracle = gauss_legendre(|s| p.eval(s), 0.0, 2.0, p.knots());
        assert!((p.integral() - oracle).abs() < 1e-14);
        assert_eq!(*p.cumulative_integral().last().unwrap(), p.integral());
    }

    #[test]
    fn sum_is_exact_on_merged_grid() {
        let p = MoverProfile::new(Chirality::R, vec![0.0, 0.3, 0.7, 1.0], vec![0.0, 1.0, -0.5, 0.0]).unwrap();
        let q = MoverProfile::new(Chirality::R, vec![0.2, 0.5, 0.9, 1.4], vec![0.0, 2.0, 0.1, 0.0]).unwrap();
        let s = p.add(&q).unwrap();
        for i in 0..=300 {
            let x = -0.1 + 1.6 * i as f64 / 300.0;
            assert!((s.eval(x) - p.eval(x) - q.eval(x)).abs() < 1e-14);
        }
        assert!(p.add(&p.neg()).unwrap().is_zero());
        assert!(p.add(&MoverProfile::zero(Chirality::L)).is_err());
    }

    #[test]
    fn vanishing_window_needs_four_zero_knots() {
        let knots = grid(0.0, 1.0, 10);
        let mut values: Vec<f64> = knots.iter().map(|k| (std::f64::consts::PI * k).sin().powi(2)).collect();
        for v in &mut values[3..=6] {
            *v = 0.0;
        }
        let p = MoverProfile::new(Chirality::R, knots, values).unwrap();
        assert!(p.vanishes_on(0.41, 0.49));
        assert!(!p.vanishes_on(0.25, 0.45));
        assert!(p.vanishes_on(2.0, 3.0));
    }

    #[test]
    fn validation() {
        assert!(MoverProfile::new(Chirality::R, vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(MoverProfile::new(Chirality::R, vec![0.0, 0.0, 1.0], vec![0.0, 1.0, 0.0]).is_err());
        assert!(MoverProfile::new(Chirality::R, vec![0.0, 1.0, 2.0], vec![0.0, 1.0]).is_err());
        let odd =
            MoverProfile::from_fn(Chirality::R, grid(-1.0, 1.0, 20), |s| s * (1.0 - s * s), |s| 1.0 - 3.0 * s * s)
                .unwrap();
        assert!(odd.clone().require_zero_mean().unwrap().derivative_of_compact_support());
        let (f, df) = bump(0.0, 1.0);
        let even = MoverProfile::from_fn(Chirality::R, grid(-1.0, 1.0, 20), f, df).unwrap();
        assert!(even.require_zero_mean().is_err());
    }
}
