//! One-dimensional quadrature for piecewise-smooth integrands with known breakpoints.

/// Absolute tolerance used by the symplectic form.
pub const SIMPSON_TOL: f64 = 1e-10;
const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson on `[a, b]` with absolute tolerance `tol`.
pub fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson applied cell by cell between sorted breakpoints.
///
/// The tolerance is shared among cells in proportion to their length.
pub fn integrate_piecewise(f: &impl Fn(f64) -> f64, breakpoints: &[f64], tol: f64) -> f64 {
    let cells = cells(breakpoints);
    let total: f64 = cells.iter().map(|(a, b)| b - a).sum();
    if total <= 0.0 {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut comp = 0.0;
    for (a, b) in cells {
        let v = adaptive_simpson(f, a, b, tol * (b - a) / total);
        // Neumaier compensation keeps long cell lists from drifting.
        let t = acc + v;
        comp += if acc.abs() >= v.abs() { (acc - t) + v } else { (v - t) + acc };
        acc = t;
    }
    acc + comp
}

/// Composite five-point Gauss–Legendre over `[a, b]` split at `breakpoints`.
pub fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64, breakpoints: &[f64]) -> f64 {
    const NODES: [f64; 5] =
        [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    pts.push(a);
    pts.push(b);
    cells(&pts)
        .into_iter()
        .map(|(lo, hi)| {
            let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
            h * NODES.iter().zip(WEIGHTS).map(|(n, w)| w * f(c + h * n)).sum::<f64>()
        })
        .sum()
}

fn cells(breakpoints: &[f64]) -> Vec<(f64, f64)> {
    let mut pts: Vec<f64> = breakpoints.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_on_smooth_functions() {
        let v = adaptive_simpson(&|x: f64| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-11);
        let v = adaptive_simpson(&|x: f64| (-x * x).exp(), -6.0, 6.0, 1e-12);
        assert!((v - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn gauss_legendre_exact_for_degree_nine() {
        let p = |x: f64| 3.0 * x.powi(9) - x.powi(4) + 2.0;
        let exact = |x: f64| 0.3 * x.powi(10) - x.powi(5) / 5.0 + 2.0 * x;
        let v = gauss_legendre(p, -0.5, 1.25, &[]);
        assert!((v - (exact(1.25) - exact(-0.5))).abs() < 1e-13);
    }

    #[test]
    fn piecewise_respects_kinks() {
        let f = |x: f64| x.abs();
        let v = integrate_piecewise(&f, &[-1.0, 0.0, 2.0], 1e-12);
        assert!((v - 2.5).abs() < 1e-13);
        assert_eq!(integrate_piecewise(&f, &[1.0], 1e-12), 0.0);
    }
}
