//! Gibbs states of the harmonic oscillator `E_n = n + 1/2` and their
//! behaviour on finite-rank projectors as `β → 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, ComplexMatrix, C64};

/// Largest admissible relative tail `e^{−βN}` for expectation values.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

pub fn default_truncation(beta: f64) -> usize {
    ((30.0 / beta).ceil() as usize).max(200)
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// `Z_β = e^{−β/2} / (1 − e^{−β})`.
pub fn partition_function(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok((-0.5 * beta).exp() / -(-beta).exp_m1())
}

/// `Σ_{n<levels} e^{−β(n+1/2)}` with compensated summation.
pub fn partition_partial_sum(beta: f64, levels: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok(neumaier((0..levels).map(|n| (-beta * (n as f64 + 0.5)).exp())))
}

/// `Σ_{n≥levels} e^{−β(n+1/2)}`, the part of `Z_β` not captured by `levels` levels.
pub fn tail_bound(beta: f64, levels: usize) -> Result<f64> {
    check_beta(beta)?;
    Ok((-beta * (levels as f64 + 0.5)).exp() / -(-beta).exp_m1())
}

pub(crate) fn neumaier(terms: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in terms {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

/// Gibbs state at inverse temperature `beta` restricted to the lowest `truncation` levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorGibbs {
    beta: f64,
    truncation: usize,
}

impl OscillatorGibbs {
    pub fn new(beta: f64, truncation: usize) -> Result<Self> {
        check_beta(beta)?;
        if truncation == 0 {
            return Err(Error::Domain("truncation must keep at least one level".into()));
        }
        Ok(Self { beta, truncation })
    }

    pub fn with_default_truncation(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Self::new(beta, default_truncation(beta))
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn partition_function(&self) -> f64 {
        (-0.5 * self.beta).exp() / -(-self.beta).exp_m1()
    }

    /// Neglected fraction of `Z_β`, `e^{−βN}`.
    pub fn relative_tail(&self) -> f64 {
        (-self.beta * self.truncation as f64).exp()
    }

    /// `e^{−βE_n} / Z_β = e^{−βn}(1 − e^{−β})`.
    pub fn level_weight(&self, n: usize) -> f64 {
        (-self.beta * n as f64).exp() * -(-self.beta).exp_m1()
    }
}

/// Observable given by its matrix on the lowest levels, or the identity.
#[derive(Clone, Debug, PartialEq)]
pub enum FiniteRankObservable {
    Identity,
    /// Diagonal in the energy basis.
    Diagonal(Vec<f64>),
    Matrix {
        matrix: ComplexMatrix,
        diagonal: Vec<f64>,
    },
}

impl FiniteRankObservable {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!("observable is {}x{}", matrix.rows(), matrix.cols())));
        }
        let diagonal = (0..matrix.rows()).map(|n| matrix.get(n, n).re).collect();
        Ok(FiniteRankObservable::Matrix { matrix, diagonal })
    }

    /// Projector onto the lowest `k` levels.
    pub fn lowest_levels(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("projector rank must be at least 1".into()));
        }
        Ok(FiniteRankObservable::Diagonal(vec![1.0; k]))
    }

    pub fn ground_state() -> Self {
        Self::lowest_levels(1).expect("rank one")
    }

    /// `|ψ⟩⟨ψ|` for a normalized vector in the energy basis.
    pub fn rank_one(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Contract("projector vector is zero".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::from_matrix(ComplexMatrix::outer(&v, &v))
    }

    /// `s = Σ_n ⟨ψ_n, a ψ_n⟩`; infinite for the identity.
    pub fn diagonal_sum(&self) -> f64 {
        match self {
            FiniteRankObservable::Identity => f64::INFINITY,
            FiniteRankObservable::Diagonal(diagonal) | FiniteRankObservable::Matrix { diagonal, .. } => {
                neumaier(diagonal.iter().copied())
            }
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            FiniteRankObservable::Identity => 1.0,
            FiniteRankObservable::Diagonal(d) => d.iter().fold(0.0, |m, w| m.max(w.abs())),
            FiniteRankObservable::Matrix { matrix, .. } => operator_norm(matrix),
        }
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        match self {
            FiniteRankObservable::Identity => true,
            FiniteRankObservable::Diagonal(d) => d.iter().all(|w| w.abs() <= tol || (w - 1.0).abs() <= tol),
            FiniteRankObservable::Matrix { matrix, .. } => {
                matrix.is_hermitian(tol) && (&(matrix * matrix) - matrix).max_abs() <= tol
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Expectation {
    pub value: f64,
    /// `‖a‖ · (tail of Z) / Z`.
    pub error_bound: f64,
}

pub fn gibbs_expectation(g: &OscillatorGibbs, a: &FiniteRankObservable) -> Result<Expectation> {
    gibbs_expectation_with(g, a, DEFAULT_TAIL_TOL)
}

pub fn gibbs_expectation_with(g: &OscillatorGibbs, a: &FiniteRankObservable, tail_tol: f64) -> Result<Expectation> {
    let rel_tail = g.relative_tail();
    if rel_tail > tail_tol {
        return Err(Error::Truncation(format!(
            "{} levels leave a relative tail of {rel_tail:e} at beta = {} (limit {tail_tol:e})",
            g.truncation(),
            g.beta()
        )));
    }
    let value = match a {
        FiniteRankObservable::Identity => neumaier((0..g.truncation()).map(|n| g.level_weight(n))),
        FiniteRankObservable::Diagonal(diagonal) | FiniteRankObservable::Matrix { diagonal, .. } => {
            neumaier(diagonal.iter().take(g.truncation()).enumerate().map(|(n, w)| g.level_weight(n) * w))
        }
    };
    Ok(Expectation { value, error_bound: a.norm() * rel_tail })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub beta: f64,
    pub omega: f64,
    /// `s / Z_β`.
    pub bound: f64,
}

/// `ω_β(p)` next to `s/Z_β` along a descending `β` grid, each at its default truncation.
pub fn projector_decay_scan(p: &FiniteRankObservable, betas: &[f64]) -> Result<Vec<DecayRow>> {
    projector_decay_scan_with(p, betas, None)
}

pub fn projector_decay_scan_with(
    p: &FiniteRankObservable,
    betas: &[f64],
    truncation: Option<usize>,
) -> Result<Vec<DecayRow>> {
    if betas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Contract("betas must be strictly descending".into()));
    }
    betas
        .iter()
        .map(|&beta| {
            let g = match truncation {
                Some(n) => OscillatorGibbs::new(beta, n)?,
                None => OscillatorGibbs::with_default_truncation(beta)?,
            };
            let omega = gibbs_expectation(&g, p)?.value;
            Ok(DecayRow { beta, omega, bound: p.diagonal_sum() / g.partition_function() })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalityReport {
    pub beta_star: f64,
    /// `(k, Tr(ϱ_{β*} p_k))` for `k = 1..=kMax`.
    pub density_traces: Vec<(usize, f64)>,
    /// `ω_β(p_k)` over the `β` grid for each `k`.
    pub gibbs_rows: Vec<GibbsRow>,
    /// `ω_β(𝟏)` at each `β`.
    pub identity_values: Vec<(f64, f64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GibbsRow {
    pub k: usize,
    pub beta: f64,
    pub omega: f64,
    pub bound: f64,
}

/// Density-matrix traces `Tr(ϱ p_k) → 1` in `k` beside `ω_β(p_k) → 0` in `β`.
pub fn normality_contradiction_report(betas: &[f64], k_max: usize, beta_star: f64) -> Result<NormalityReport> {
    if k_max == 0 {
        return Err(Error::Domain("kMax must be at least 1".into()));
    }
    let rho = OscillatorGibbs::with_default_truncation(beta_star)?;
    // The candidate density matrix is the truncated Gibbs state, renormalised.
    let norm = neumaier((0..rho.truncation()).map(|n| rho.level_weight(n)));
    let mut density_traces = Vec::with_capacity(k_max);
    let mut partial = Vec::with_capacity(k_max);
    for k in 1..=k_max.min(rho.truncation()) {
        partial.push(rho.level_weight(k - 1));
        density_traces.push((k, (neumaier(partial.iter().copied()) / norm).min(1.0)));
    }
    let mut gibbs_rows = Vec::new();
    for k in 1..=k_max {
        let p = FiniteRankObservable::lowest_levels(k)?;
        for row in projector_decay_scan(&p, betas)? {
            gibbs_rows.push(GibbsRow { k, beta: row.beta, omega: row.omega, bound: row.bound });
        }
    }
    let identity_values = betas
        .iter()
        .map(|&b| {
            let g = OscillatorGibbs::with_default_truncation(b)?;
            Ok((b, gibbs_expectation(&g, &FiniteRankObservable::Identity)?.value))
        })
        .collect::<Result<_>>()?;
    Ok(NormalityReport { beta_star, density_traces, gibbs_rows, identity_values })
}
