//! d'Alembert decomposition of Cauchy data on a surface below the strips.

use super::geometry::Chirality;
use super::profile::MoverProfile;
use crate::error::{Error, Result};

const EDGE_TOL: f64 = 1e-12;
/// Allowed `|∫ ∂ₜφ|` relative to `∫ |∂ₜφ|`.
const ZERO_MEAN_TOL: f64 = 1e-7;

/// Splits `(φ, ∂ₜφ)` sampled at `x` on `t = t_surface` into `ξ_R(t − x)` and `ξ_L(t + x)`.
///
/// With `Π(x) = ∫_{-∞}^x ∂ₜφ`, the left mover is `(φ + Π)/2` and the right
/// mover `(φ − Π)/2`. Both must vanish to the right of the data, so `∫ ∂ₜφ = 0`
/// is required; [`split_mover_rates`] handles the general case.
pub fn split_movers(t_surface: f64, x: &[f64], phi: &[f64], phi_t: &[f64]) -> Result<(MoverProfile, MoverProfile)> {
    check_data(x, phi, phi_t)?;
    let dphi_dx = centred(x, phi);
    let dphi_t_dx = centred(x, phi_t);
    let rate = MoverProfile::with_slopes(Chirality::L, x.to_vec(), phi_t.to_vec(), dphi_t_dx)?;
    let mut pi = rate.cumulative_integral();
    let total = *pi.last().unwrap_or(&0.0);
    let weight: Vec<f64> = std::iter::once(0.0)
        .chain(x.windows(2).zip(phi_t.windows(2)).scan(0.0, |acc, (xs, ys)| {
            *acc += 0.5 * (xs[1] - xs[0]) * (ys[0].abs() + ys[1].abs());
            Some(*acc)
        }))
        .collect();
    let scale = *weight.last().unwrap_or(&0.0);
    if total.abs() > ZERO_MEAN_TOL * scale.max(1.0) {
        return Err(Error::Contract(format!(
            "integral of the time derivative is {total:e}; the movers would not be compactly supported"
        )));
    }
    // Quadrature leaves a tiny residual; spread it so the movers vanish exactly at the far end.
    if scale > 0.0 {
        for (p, w) in pi.iter_mut().zip(&weight) {
            *p -= total * w / scale;
        }
    }
    let n = x.len();
    let left_vals: Vec<f64> = (0..n).map(|k| 0.5 * (phi[k] + pi[k])).collect();
    let left_slopes: Vec<f64> = (0..n).map(|k| 0.5 * (dphi_dx[k] + phi_t[k])).collect();
    let xi_l =
        MoverProfile::with_slopes(Chirality::L, x.iter().map(|xk| t_surface + xk).collect(), left_vals, left_slopes)?;
    // u = t − x runs backwards along the grid and d/du = −d/dx.
    let right_knots: Vec<f64> = x.iter().rev().map(|xk| t_surface - xk).collect();
    let right_vals: Vec<f64> = (0..n).rev().map(|k| 0.5 * (phi[k] - pi[k])).collect();
    let right_slopes: Vec<f64> = (0..n).rev().map(|k| -0.5 * (dphi_dx[k] - phi_t[k])).collect();
    let xi_r = MoverProfile::with_slopes(Chirality::R, right_knots, right_vals, right_slopes)?;
    Ok((xi_r, xi_l))
}

/// Derivatives `ξ_R′ = (∂ₜφ − ∂ₓφ)/2` in `u` and `ξ_L′ = (∂ₜφ + ∂ₓφ)/2` in `v`.
pub fn split_mover_rates(
    t_surface: f64,
    x: &[f64],
    phi: &[f64],
    phi_t: &[f64],
) -> Result<(MoverProfile, MoverProfile)> {
    check_data(x, phi, phi_t)?;
    let dphi_dx = centred(x, phi);
    let n = x.len();
    let right = MoverProfile::new(
        Chirality::R,
        x.iter().rev().map(|xk| t_surface - xk).collect(),
        (0..n).rev().map(|k| 0.5 * (phi_t[k] - dphi_dx[k])).collect(),
    )?;
    let left = MoverProfile::new(
        Chirality::L,
        x.iter().map(|xk| t_surface + xk).collect(),
        (0..n).map(|k| 0.5 * (phi_t[k] + dphi_dx[k])).collect(),
    )?;
    Ok((right, left))
}

fn check_data(x: &[f64], phi: &[f64], phi_t: &[f64]) -> Result<()> {
    if x.len() != phi.len() || x.len() != phi_t.len() {
        return Err(Error::Dimension(format!(
            "{} sample points, {} values, {} time derivatives",
            x.len(),
            phi.len(),
            phi_t.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::Contract("at least three samples are needed".into()));
    }
    let n = x.len();
    for (name, data) in [("phi", phi), ("phi_t", phi_t)] {
        let scale = data.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if data[0].abs() > EDGE_TOL * scale || data[n - 1].abs() > EDGE_TOL * scale {
            return Err(Error::Contract(format!("{name} does not vanish at the ends of the sample grid")));
        }
    }
    Ok(())
}

fn centred(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n).map(|i| if i == 0 || i + 1 == n { 0.0 } else { (y[i + 1] - y[i - 1]) / (x[i + 1] - x[i - 1]) }).collect()
}
