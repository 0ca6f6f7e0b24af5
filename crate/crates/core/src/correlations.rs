//! Comparable correlations on a tripartite space `H₁ ⊗ H₂ ⊗ H₃`.
//!
//! `U` acts on the first two factors, observables `a₁` on the first and `a₃` on
//! the third. For each pair the scalars
//!
//! ```text
//! c = ⟨a₁Uψ, a₃Uψ⟩,   d = ⟨a₁ψ, a₃ψ⟩,   s = ‖a₁ψ‖² + ‖a₃ψ‖²
//! ```
//!
//! enter the two estimates `|c − (q+1)d| ≤ (q/2)s` and `|d − (q+1)c| ≤ (q/2)s`.
//! The norm form asks for `K` with `‖(e^{iθ}a₁ + a₃)Uψ‖ ≤ K‖(e^{iθ}a₁ + a₃)ψ‖`
//! and the reverse inequality. Under invariance of the `a₁` and `a₃`
//! expectations the two are equivalent with `K² = q + 1`. [`min_q`] solves the
//! scalar inequalities; [`min_k`] evaluates the norm ratios from the vectors
//! themselves, so comparing the two is a genuine cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{gell_mann, matrix_unit};
use crate::linalg::{operator_norm, ComplexMatrix, UnitaryOperator, C64};
use crate::random::{
    random_complex_matrix, random_probabilities, random_state_vector, random_unitary, seeded_rng, Rng,
};

/// Random matrices appended to each default sample set.
pub const DEFAULT_RANDOM_SAMPLES: usize = 50;
pub const DEFAULT_PHASE_GRID: usize = 256;
/// Tolerance of the invariance precondition checked by the estimators.
pub const INVARIANCE_TOL: f64 = 1e-10;
const ZERO_NORM: f64 = 1e-12;
const ROUNDING_FLOOR: f64 = 1e-14;
const GOLDEN_STEPS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationInstance {
    dims: [usize; 3],
    psi: Vec<C64>,
    u12: UnitaryOperator,
    samples_a1: Vec<ComplexMatrix>,
    samples_a3: Vec<ComplexMatrix>,
}

/// Wire form; missing sample lists are generated from `seed`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub dims: [usize; 3],
    #[serde(with = "complex_vec")]
    pub psi: Vec<C64>,
    #[serde(rename = "U12")]
    pub u12: UnitaryOperator,
    #[serde(rename = "samplesA1", default, skip_serializing_if = "Option::is_none")]
    pub samples_a1: Option<Vec<ComplexMatrix>>,
    #[serde(rename = "samplesA3", default, skip_serializing_if = "Option::is_none")]
    pub samples_a3: Option<Vec<ComplexMatrix>>,
    #[serde(default)]
    pub seed: u64,
}

/// Complex vectors as `[[re, im], ...]`.
pub mod complex_vec {
    use super::C64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[C64], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<C64>, D::Error> {
        let raw = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(raw.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl CorrelationInstance {
    pub fn new(
        dims: [usize; 3],
        psi: Vec<C64>,
        u12: UnitaryOperator,
        samples_a1: Vec<ComplexMatrix>,
        samples_a3: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let [d1, d2, d3] = dims;
        if d1 == 0 || d2 == 0 || d3 == 0 {
            return Err(Error::Dimension(format!("factor dimensions must be positive, got {dims:?}")));
        }
        if psi.len() != d1 * d2 * d3 {
            return Err(Error::Dimension(format!("psi has {} entries, expected {}", psi.len(), d1 * d2 * d3)));
        }
        if psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Contract("psi has non-finite entries".into()));
        }
        let norm = norm(&psi);
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!("psi must be a unit vector, has norm {norm}")));
        }
        if u12.dim() != d1 * d2 {
            return Err(Error::Dimension(format!("U12 has dimension {}, expected {}", u12.dim(), d1 * d2)));
        }
        for (name, list, d) in [("samplesA1", &samples_a1, d1), ("samplesA3", &samples_a3, d3)] {
            if list.is_empty() {
                return Err(Error::Contract(format!("{name} is empty")));
            }
            if let Some(k) = list.iter().position(|a| a.rows() != d || a.cols() != d) {
                return Err(Error::Dimension(format!("{name}[{k}] is not {d}x{d}")));
            }
        }
        Ok(Self { dims, psi, u12, samples_a1, samples_a3 })
    }

    pub fn from_spec(spec: InstanceSpec) -> Result<Self> {
        let mut rng = seeded_rng(spec.seed);
        let a1 = match spec.samples_a1 {
            Some(v) => v,
            None => default_samples(spec.dims[0], DEFAULT_RANDOM_SAMPLES, &mut rng),
        };
        let a3 = match spec.samples_a3 {
            Some(v) => v,
            None => default_samples(spec.dims[2], DEFAULT_RANDOM_SAMPLES, &mut rng),
        };
        Self::new(spec.dims, spec.psi, spec.u12, a1, a3)
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            dims: self.dims,
            psi: self.psi.clone(),
            u12: self.u12.clone(),
            samples_a1: Some(self.samples_a1.clone()),
            samples_a3: Some(self.samples_a3.clone()),
            seed: 0,
        }
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn psi(&self) -> &[C64] {
        &self.psi
    }

    pub fn u12(&self) -> &UnitaryOperator {
        &self.u12
    }

    pub fn samples_a1(&self) -> &[ComplexMatrix] {
        &self.samples_a1
    }

    pub fn samples_a3(&self) -> &[ComplexMatrix] {
        &self.samples_a3
    }

    pub fn with_samples(&self, samples_a1: Vec<ComplexMatrix>, samples_a3: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(self.dims, self.psi.clone(), self.u12.clone(), samples_a1, samples_a3)
    }

    /// `(U₁₂ ⊗ I₃) ψ`.
    pub fn evolved(&self) -> Vec<C64> {
        apply_u12(&self.u12, &self.psi, self.dims)
    }
}

/// `(a ⊗ I₂ ⊗ I₃) v`.
pub fn apply_factor1(a: &ComplexMatrix, v: &[C64], dims: [usize; 3]) -> Vec<C64> {
    let rest = dims[1] * dims[2];
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for i in 0..dims[0] {
        for j in 0..dims[0] {
            let aij = a.get(i, j);
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..rest {
                out[i * rest + r] += aij * v[j * rest + r];
            }
        }
    }
    out
}

/// `(I₁ ⊗ I₂ ⊗ a) v`.
pub fn apply_factor3(a: &ComplexMatrix, v: &[C64], dims: [usize; 3]) -> Vec<C64> {
    let d3 = dims[2];
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for block in 0..dims[0] * dims[1] {
        for i in 0..d3 {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..d3 {
                acc += a.get(i, j) * v[block * d3 + j];
            }
            out[block * d3 + i] = acc;
        }
    }
    out
}

/// `(U ⊗ I₃) v`.
pub fn apply_u12(u: &UnitaryOperator, v: &[C64], dims: [usize; 3]) -> Vec<C64> {
    let (d12, d3) = (dims[0] * dims[1], dims[2]);
    let m = u.matrix();
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for i in 0..d12 {
        for j in 0..d12 {
            let uij = m.get(i, j);
            for k in 0..d3 {
                out[i * d3 + k] += uij * v[j * d3 + k];
            }
        }
    }
    out
}

fn inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Identity, matrix units, Gell-Mann generators and `random` Ginibre matrices.
pub fn default_samples(d: usize, random: usize, rng: &mut Rng) -> Vec<ComplexMatrix> {
    let mut out = vec![ComplexMatrix::identity(d)];
    for i in 0..d {
        for j in 0..d {
            out.push(matrix_unit(d, i, j));
        }
    }
    out.extend(gell_mann(d));
    out.extend((0..random).map(|_| random_complex_matrix(d, d, rng)));
    out
}

/// Randomized instance with nontrivial correlations and exact invariance.
///
/// `ψ = Σᵢ √pᵢ eᵢ ⊗ fᵢ ⊗ ηᵢ` with `{eᵢ}` a random basis of factor 1, `fᵢ`
/// random unit vectors and `{ηᵢ}` orthonormal in factor 3. The unitary is a
/// phase gate diagonal in `{eᵢ}` times a gate on factor 2 controlled by the
/// same basis, so the factor-1 marginal of `ψ` is untouched. Requires
/// `d₃ ≥ d₁`.
pub fn random_instance(dims: [usize; 3], seed: u64) -> Result<CorrelationInstance> {
    let [d1, d2, d3] = dims;
    if d1 == 0 || d2 == 0 || d3 == 0 {
        return Err(Error::Dimension(format!("factor dimensions must be positive, got {dims:?}")));
    }
    if d3 < d1 {
        return Err(Error::Contract(format!("random instances need d3 ≥ d1, got {dims:?}")));
    }
    let mut rng = seeded_rng(seed);
    let basis1 = random_unitary(d1, &mut rng);
    let basis3 = random_unitary(d3, &mut rng);
    let p = random_probabilities(d1, &mut rng);
    let f: Vec<Vec<C64>> = (0..d1).map(|_| random_state_vector(d2, &mut rng)).collect();
    let mut psi = vec![C64::new(0.0, 0.0); d1 * d2 * d3];
    for i in 0..d1 {
        let e = basis1.matrix().column(i);
        let eta = basis3.matrix().column(i);
        let w = p[i].sqrt();
        for (a, ea) in e.iter().enumerate() {
            for (b, fb) in f[i].iter().enumerate() {
                for (c, ec) in eta.iter().enumerate() {
                    psi[(a * d2 + b) * d3 + c] += w * ea * fb * ec;
                }
            }
        }
    }
    let n = norm(&psi);
    psi.iter_mut().for_each(|z| *z /= n);

    let phases: Vec<f64> = (0..d1).map(|_| crate::random::uniform(&mut rng, 0.0, std::f64::consts::TAU)).collect();
    let controlled: Vec<UnitaryOperator> = (0..d1).map(|_| random_unitary(d2, &mut rng)).collect();
    let mut u = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        let e = basis1.matrix().column(i);
        let proj = ComplexMatrix::outer(&e, &e);
        let block = crate::linalg::tensor_product(&proj, controlled[i].matrix())?;
        u = &u + &block.scale(C64::from_polar(1.0, phases[i]));
    }
    let u12 = UnitaryOperator::new(u)?;
    let a1 = default_samples(d1, DEFAULT_RANDOM_SAMPLES, &mut rng);
    let a3 = default_samples(d3, DEFAULT_RANDOM_SAMPLES, &mut rng);
    CorrelationInstance::new(dims, psi, u12, a1, a3)
}

/// `|⟨ψ, (U†aU − a)ψ⟩| ≤ tol·‖a‖` for every sampled `a₁` and `a₃`.
pub fn check_invariance(inst: &CorrelationInstance, tol: f64) -> bool {
    invariance_defect(inst) <= tol
}

/// Largest relative violation of the invariance precondition.
pub fn invariance_defect(inst: &CorrelationInstance) -> f64 {
    let psi = &inst.psi;
    let upsi = inst.evolved();
    let mut worst: f64 = 0.0;
    let factor1 =
        inst.samples_a1.iter().map(|a| (a, apply_factor1 as fn(&ComplexMatrix, &[C64], [usize; 3]) -> Vec<C64>));
    let factor3 =
        inst.samples_a3.iter().map(|a| (a, apply_factor3 as fn(&ComplexMatrix, &[C64], [usize; 3]) -> Vec<C64>));
    for (a, apply) in factor1.chain(factor3) {
        let scale = operator_norm(a);
        if scale == 0.0 {
            continue;
        }
        let after = inner(&upsi, &apply(a, &upsi, inst.dims));
        let before = inner(psi, &apply(a, psi, inst.dims));
        worst = worst.max((after - before).norm() / scale);
    }
    worst
}

fn require_invariance(inst: &CorrelationInstance) -> Result<()> {
    let defect = invariance_defect(inst);
    if defect > INVARIANCE_TOL {
        return Err(Error::Contract(format!("U does not preserve the sampled expectations (defect {defect:e})")));
    }
    Ok(())
}

/// Vectors shared by both estimators for one sample.
struct Images {
    plain: Vec<C64>,
    evolved: Vec<C64>,
}

fn images(inst: &CorrelationInstance) -> (Vec<Images>, Vec<Images>) {
    let upsi = inst.evolved();
    let a1 = inst
        .samples_a1
        .iter()
        .map(|a| Images { plain: apply_factor1(a, &inst.psi, inst.dims), evolved: apply_factor1(a, &upsi, inst.dims) })
        .collect();
    let a3 = inst
        .samples_a3
        .iter()
        .map(|a| Images { plain: apply_factor3(a, &inst.psi, inst.dims), evolved: apply_factor3(a, &upsi, inst.dims) })
        .collect();
    (a1, a3)
}

/// Scalars of one observable pair.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairData {
    pub a1: usize,
    pub a3: usize,
    /// `⟨a₁Uψ, a₃Uψ⟩` as `[re, im]`.
    pub c: [f64; 2],
    /// `⟨a₁ψ, a₃ψ⟩` as `[re, im]`.
    pub d: [f64; 2],
    pub s: f64,
    /// Least `q` for `|c − (q+1)d| ≤ (q/2)s`.
    #[serde(rename = "qForward")]
    pub q_forward: f64,
    /// Least `q` for `|d − (q+1)c| ≤ (q/2)s`.
    #[serde(rename = "qBackward")]
    pub q_backward: f64,
}

impl PairData {
    pub fn q(&self) -> f64 {
        self.q_forward.max(self.q_backward)
    }

    pub fn c(&self) -> C64 {
        C64::new(self.c[0], self.c[1])
    }

    pub fn d(&self) -> C64 {
        C64::new(self.d[0], self.d[1])
    }

    /// Slack `(q/2)s − |c − (q+1)d|` of the first estimate at level `q`; nonnegative when it holds.
    pub fn forward_slack(&self, q: f64) -> f64 {
        0.5 * q * self.s - (self.c() - (q + 1.0) * self.d()).norm()
    }

    pub fn backward_slack(&self, q: f64) -> f64 {
        0.5 * q * self.s - (self.d() - (q + 1.0) * self.c()).norm()
    }
}

/// Least `q ≥ 0` with `|a − q·b| ≤ (q/2)s`.
///
/// Squaring gives `(|b|² − s²/4)q² − 2Re(a b̄)q + |a|² ≤ 0`. Cauchy–Schwarz makes
/// the leading coefficient nonpositive, and when `a ≠ 0` the quadratic is
/// positive at zero, so the feasible set is a half-line starting at the
/// positive root.
///
/// `a` below the rounding level of `s` counts as zero; otherwise the
/// degenerate case `|b| = s/2` would turn rounding noise into an infinite `q`.
pub fn estimate_threshold(a: C64, b: C64, s: f64) -> f64 {
    if a.norm() <= ROUNDING_FLOOR * (s + b.norm()) {
        return 0.0;
    }
    let c0 = a.norm_sqr();
    let lead = (b.norm_sqr() - 0.25 * s * s).min(0.0);
    let lin = -2.0 * (a * b.conj()).re;
    let disc = (lin * lin - 4.0 * lead * c0).max(0.0).sqrt();
    if lin < 0.0 {
        2.0 * c0 / (disc - lin)
    } else if lead < 0.0 {
        (lin + disc) / (-2.0 * lead)
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QReport {
    #[serde(rename = "minQ")]
    pub min_q: f64,
    /// Pair attaining the maximum, `(a₁ index, a₃ index)`.
    #[serde(rename = "worstPair")]
    pub worst_pair: (usize, usize),
    #[serde(skip)]
    pub pairs: Vec<PairData>,
}

impl QReport {
    pub fn is_finite(&self) -> bool {
        self.min_q.is_finite()
    }
}

/// Least `q` satisfying both estimates for every sampled pair.
///
/// The per-pair feasible sets are half-lines, so the answer is the largest
/// per-pair threshold. An infinite value flags a pair with no admissible `q`.
pub fn min_q(inst: &CorrelationInstance) -> Result<QReport> {
    require_invariance(inst)?;
    let (a1, a3) = images(inst);
    let mut pairs = Vec::with_capacity(a1.len() * a3.len());
    let mut best = (0.0, (0, 0));
    for (i, x) in a1.iter().enumerate() {
        let n1 = inner(&x.plain, &x.plain).re;
        for (j, y) in a3.iter().enumerate() {
            let c = inner(&x.evolved, &y.evolved);
            let d = inner(&x.plain, &y.plain);
            let s = n1 + inner(&y.plain, &y.plain).re;
            let pair = PairData {
                a1: i,
                a3: j,
                c: [c.re, c.im],
                d: [d.re, d.im],
                s,
                q_forward: estimate_threshold(c - d, d, s),
                q_backward: estimate_threshold(d - c, c, s),
            };
            let q = pair.q();
            if q > best.0 || (q.is_infinite() && best.0.is_finite()) {
                best = (q, (i, j));
            }
            pairs.push(pair);
        }
    }
    Ok(QReport { min_q: best.0, worst_pair: best.1, pairs })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KReport {
    #[serde(rename = "minK")]
    pub min_k: f64,
    #[serde(rename = "worstPair")]
    pub worst_pair: (usize, usize),
    #[serde(rename = "worstPhase")]
    pub worst_phase: f64,
    /// Some combination annihilates `ψ` but not `Uψ` (or the reverse).
    #[serde(rename = "separatingFailure")]
    pub separating_failure: bool,
}

/// Least `K ≥ 1` bounding both norm ratios over the phase grid.
///
/// The grid maximum of each pair is polished by golden-section search in the
/// neighbouring cells, so the value does not depend on the grid size beyond
/// locating the right basin.
pub fn min_k(inst: &CorrelationInstance, phase_grid: usize) -> Result<KReport> {
    min_k_with(inst, phase_grid, true)
}

/// As [`min_k`]; `refine = false` keeps the raw grid maximum.
pub fn min_k_with(inst: &CorrelationInstance, phase_grid: usize, refine: bool) -> Result<KReport> {
    if phase_grid < 16 {
        return Err(Error::Contract(format!("phase grid needs at least 16 points, got {phase_grid}")));
    }
    require_invariance(inst)?;
    let (a1, a3) = images(inst);
    let step = std::f64::consts::TAU / phase_grid as f64;
    let mut report = KReport { min_k: 1.0, worst_pair: (0, 0), worst_phase: 0.0, separating_failure: false };
    for (i, x) in a1.iter().enumerate() {
        for (j, y) in a3.iter().enumerate() {
            let scale = (norm(&x.plain) + norm(&y.plain)).max(norm(&x.evolved) + norm(&y.evolved));
            if scale == 0.0 {
                continue;
            }
            // forward: ‖·Uψ‖/‖·ψ‖, backward: the inverse.
            for forward in [true, false] {
                let (num, den) = if forward {
                    (x.evolved.as_slice(), x.plain.as_slice())
                } else {
                    (x.plain.as_slice(), x.evolved.as_slice())
                };
                let (num3, den3) = if forward {
                    (y.evolved.as_slice(), y.plain.as_slice())
                } else {
                    (y.plain.as_slice(), y.evolved.as_slice())
                };
                let ratio = |theta: f64| -> f64 {
                    let w = C64::from_polar(1.0, theta);
                    let top: f64 = num.iter().zip(num3).map(|(a, b)| (w * a + b).norm_sqr()).sum::<f64>().sqrt();
                    let bottom: f64 = den.iter().zip(den3).map(|(a, b)| (w * a + b).norm_sqr()).sum::<f64>().sqrt();
                    if bottom <= ZERO_NORM * scale {
                        if top <= ZERO_NORM * scale {
                            0.0
                        } else {
                            f64::INFINITY
                        }
                    } else {
                        top / bottom
                    }
                };
                let (mut best_theta, mut best) = (0.0, f64::NEG_INFINITY);
                for k in 0..phase_grid {
                    let theta = k as f64 * step;
                    let r = ratio(theta);
                    if r > best {
                        best = r;
                        best_theta = theta;
                    }
                }
                if refine && best.is_finite() {
                    let (theta, r) = golden_max(&ratio, best_theta - step, best_theta + step);
                    if r > best {
                        best = r;
                        best_theta = theta;
                    }
                }
                if best.is_infinite() {
                    report.separating_failure = true;
                }
                if best > report.min_k {
                    report.min_k = best;
                    report.worst_pair = (i, j);
                    report.worst_phase = best_theta.rem_euclid(std::f64::consts::TAU);
                }
            }
        }
    }
    Ok(report)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComparabilityReport {
    #[serde(rename = "minQ")]
    pub min_q: f64,
    #[serde(rename = "minK")]
    pub min_k: f64,
    pub passed: bool,
    #[serde(rename = "worstPairQ")]
    pub worst_pair_q: (usize, usize),
    #[serde(rename = "worstPairK")]
    pub worst_pair_k: (usize, usize),
    #[serde(rename = "separatingFailure")]
    pub separating_failure: bool,
    #[serde(rename = "perPairData", skip_serializing_if = "Vec::is_empty", default)]
    pub per_pair: Vec<PairData>,
}

/// Both sides of the equivalence on the shared sample set.
pub fn verify_lemma(inst: &CorrelationInstance, tol: f64) -> Result<ComparabilityReport> {
    verify_lemma_with(inst, tol, DEFAULT_PHASE_GRID)
}

pub fn verify_lemma_with(inst: &CorrelationInstance, tol: f64, phase_grid: usize) -> Result<ComparabilityReport> {
    let q = min_q(inst)?;
    let k = min_k(inst, phase_grid)?;
    let passed = q.min_q.is_finite()
        && k.min_k.is_finite()
        && (k.min_k * k.min_k - (q.min_q + 1.0)).abs() <= tol * (q.min_q + 1.0);
    Ok(ComparabilityReport {
        min_q: q.min_q,
        min_k: k.min_k,
        passed,
        worst_pair_q: q.worst_pair,
        worst_pair_k: k.worst_pair,
        separating_failure: k.separating_failure,
        per_pair: q.pairs,
    })
}
