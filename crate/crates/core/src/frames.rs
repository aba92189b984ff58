//! Frame analysis for finite systems of vectors given through an inner
//! product.
//!
//! An [`OrbitSystem`] is the finite section `{π(λ)g : λ ∈ index set}` of an
//! orbit. Everything here only needs pairwise inner products, so the same
//! code runs on explicit vectors of `ℂⁿ` and on reproducing kernels of a
//! Bergman space, where vectors are known only through closed-form inner
//! products.
//!
//! Gram matrices use the convention `G[i][j] = ⟨v_j, v_i⟩`, so that
//! `‖Σ c_i v_i‖² = c* G c`.

use std::collections::HashSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{
    self, generalized_rayleigh_extremes, hermitian_eigen, hermitian_eigenvalues, inverse_sqrt_psd, pseudo_inverse_psd,
    ComplexDenseMatrix, LinalgError, DEFAULT_REL_TOL,
};

/// Version tag written with every serialised [`FrameReport`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Largest index set for which a Gram matrix is assembled.
pub const DEFAULT_GRAM_CAP: usize = 4096;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FrameError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("index set of size {len} exceeds the Gram cap {cap}")]
    TooLarge { len: usize, cap: usize },
    #[error("inner-product oracle is inconsistent: {0}")]
    OracleInconsistency(String),
    #[error("tiling precondition violated: {0}")]
    Tiling(String),
    #[error("frame operator vanishes on the span")]
    ZeroOperator,
    #[error("system is not a Riesz sequence (Gram rank {rank} < {len})")]
    NotRiesz { rank: usize, len: usize },
    #[error("explicit vectors have inconsistent lengths")]
    RaggedVectors,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("invalid report input: {0}")]
    InvalidInput(String),
}

/// A vector of some Hilbert space, known through its inner products.
pub trait HilbertVector {
    /// `⟨self, other⟩`, linear in `self`.
    fn inner(&self, other: &Self) -> Complex64;
}

/// Explicit vector in `ℂⁿ` with `⟨u, v⟩ = Σ u_k conj(v_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector(pub Vec<Complex64>);

impl HilbertVector for CVector {
    fn inner(&self, other: &Self) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b.conj()).sum()
    }
}

impl CVector {
    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        CVector(v)
    }

    /// Standard basis of `ℂⁿ`.
    pub fn standard_basis(n: usize) -> Vec<Self> {
        (0..n).map(|k| Self::basis(n, k)).collect()
    }
}

/// Dimension of the ambient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ambient {
    Finite(usize),
    Infinite,
}

/// Finite section of an orbit `π(Λ)g`.
#[derive(Debug, Clone)]
pub struct OrbitSystem<V> {
    pub labels: Vec<String>,
    pub vectors: Vec<V>,
    pub generator_norm_sq: f64,
    pub ambient: Ambient,
}

impl<V: HilbertVector> OrbitSystem<V> {
    pub fn new(labels: Vec<String>, vectors: Vec<V>, generator_norm_sq: f64, ambient: Ambient) -> Self {
        assert_eq!(labels.len(), vectors.len(), "one label per vector");
        Self {
            labels,
            vectors,
            generator_norm_sq,
            ambient,
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `⟨v_i, v_j⟩`.
    pub fn inner(&self, i: usize, j: usize) -> Complex64 {
        self.vectors[i].inner(&self.vectors[j])
    }
}

impl<V: HilbertVector + Clone> OrbitSystem<V> {
    /// Subsystem on the given indices (in the given order).
    pub fn subsystem(&self, indices: &[usize]) -> Self {
        Self {
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            vectors: indices.iter().map(|&i| self.vectors[i].clone()).collect(),
            generator_norm_sq: self.generator_norm_sq,
            ambient: self.ambient,
        }
    }
}

/// Hermitian PSD Gram matrix of an orbit system.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    pub matrix: ComplexDenseMatrix,
    pub labels: Vec<String>,
}

/// Gram matrix over the whole system, checked Hermitian and PSD.
pub fn gram<V: HilbertVector>(system: &OrbitSystem<V>) -> Result<GramMatrix, FrameError> {
    gram_of(&system.vectors, &system.labels, DEFAULT_GRAM_CAP)
}

fn gram_of<V: HilbertVector>(vectors: &[V], labels: &[String], cap: usize) -> Result<GramMatrix, FrameError> {
    let n = vectors.len();
    if n > cap {
        return Err(FrameError::TooLarge { len: n, cap });
    }
    let mut m = ComplexDenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = vectors[j].inner(&vectors[i]);
        }
    }
    let scale = (0..n).map(|i| m[(i, i)].re.abs()).fold(0.0, f64::max);
    for i in 0..n {
        let d = m[(i, i)];
        if !(d.re > 0.0) || d.im.abs() > 1e-10 * scale {
            return Err(FrameError::OracleInconsistency(format!("diagonal entry {i} is {d}")));
        }
    }
    let dev = m.hermitian_deviation();
    if dev > 1e-10 * scale {
        return Err(FrameError::OracleInconsistency(format!("Hermitian deviation {dev:e}")));
    }
    let matrix = m.hermitian_part();
    let values = hermitian_eigenvalues(&matrix)?;
    let (lo, hi) = (values[0], values[n - 1]);
    if lo < -DEFAULT_REL_TOL * hi {
        return Err(FrameError::OracleInconsistency(format!(
            "Gram matrix has eigenvalue {lo:e} against maximum {hi:e}"
        )));
    }
    Ok(GramMatrix {
        matrix,
        labels: labels.to_vec(),
    })
}

/// `(λ_min, λ_max)` of the Gram matrix: the optimal Riesz bounds of the
/// finite system.
pub fn riesz_extremes(g: &GramMatrix) -> Result<(f64, f64), FrameError> {
    let v = hermitian_eigenvalues(&g.matrix)?;
    Ok((v[0].max(0.0), v[v.len() - 1]))
}

fn explicit_dim(system: &OrbitSystem<CVector>) -> Result<usize, FrameError> {
    let n = match system.ambient {
        Ambient::Finite(n) => n,
        Ambient::Infinite => system.vectors.first().map_or(0, |v| v.0.len()),
    };
    if system.vectors.iter().any(|v| v.0.len() != n) {
        return Err(FrameError::RaggedVectors);
    }
    Ok(n)
}

/// Frame operator `S = Σ v v*` of explicit vectors over the given indices.
pub fn frame_operator(system: &OrbitSystem<CVector>, indices: &[usize]) -> Result<ComplexDenseMatrix, FrameError> {
    let n = explicit_dim(system)?;
    let mut s = ComplexDenseMatrix::zeros(n, n);
    for &k in indices {
        let v = &system.vectors[k].0;
        for a in 0..n {
            for b in 0..n {
                s[(a, b)] += v[a] * v[b].conj();
            }
        }
    }
    Ok(s)
}

fn all_indices<V>(system: &OrbitSystem<V>) -> Vec<usize> {
    (0..system.vectors.len()).collect()
}

/// Optimal frame bounds over `ℂⁿ`: extreme eigenvalues of the frame
/// operator, with `A = 0` when the system does not span.
pub fn frame_extremes_finite(system: &OrbitSystem<CVector>) -> Result<(f64, f64), FrameError> {
    let s = frame_operator(system, &all_indices(system))?;
    let values = hermitian_eigenvalues(&s)?;
    let upper = values[values.len() - 1];
    let lower = if linalg::rank_of_spectrum(&values, DEFAULT_REL_TOL) < values.len() {
        0.0
    } else {
        values[0]
    };
    Ok((lower, upper))
}

/// Matrix `C[p][λ] = ⟨v_λ, probe_p⟩` over the given system indices. For
/// `f = Σ x_p probe_p` this gives `Σ_λ |⟨f, v_λ⟩|² = x* C C* x`.
pub fn cross_matrix<V: HilbertVector>(probes: &[V], system: &OrbitSystem<V>, indices: &[usize]) -> ComplexDenseMatrix {
    let mut c = ComplexDenseMatrix::zeros(probes.len(), indices.len());
    for (p, probe) in probes.iter().enumerate() {
        for (col, &k) in indices.iter().enumerate() {
            c[(p, col)] = system.vectors[k].inner(probe);
        }
    }
    c
}

/// Probe-span frame-bound estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeEstimate {
    /// Minimum of the restricted quotient. Subspace restriction biases it up,
    /// index truncation biases it down; it is an estimate, not a bound.
    pub lower: f64,
    /// Maximum of the restricted quotient: a lower bound for the optimal
    /// upper frame bound of the full system.
    pub upper: f64,
    pub probe_count: usize,
    /// Dimension of the probe span retained after rank filtering.
    pub probe_rank: usize,
}

/// Extremes of `Σ_λ |⟨f, v_λ⟩|² / ‖f‖²` over `f` in the span of the probes.
pub fn frame_bounds_probe<V: HilbertVector>(
    system: &OrbitSystem<V>,
    probes: &[V],
) -> Result<ProbeEstimate, FrameError> {
    let c = cross_matrix(probes, system, &all_indices(system));
    let n = c.matmul(&c.adjoint());
    let d = gram_of(probes, &vec![String::new(); probes.len()], DEFAULT_GRAM_CAP)?;
    let (lower, upper) = generalized_rayleigh_extremes(&n, &d.matrix, DEFAULT_REL_TOL)?;
    let probe_rank = linalg::numerical_rank(&d.matrix, DEFAULT_REL_TOL)?;
    Ok(ProbeEstimate {
        lower: lower.max(0.0),
        upper,
        probe_count: probes.len(),
        probe_rank,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCheck {
    pub joint_rank: usize,
    pub reduced_rank: usize,
}

impl SpanCheck {
    pub fn equal(&self) -> bool {
        self.joint_rank == self.reduced_rank
    }
}

/// Compares the span of `full ∪ reduced` with the span of `reduced` by
/// numerical rank of the respective Gram matrices.
pub fn check_span_equality<V: HilbertVector>(
    system: &OrbitSystem<V>,
    full: &[usize],
    reduced: &[usize],
) -> Result<SpanCheck, FrameError> {
    let mut joint: Vec<usize> = Vec::new();
    let mut seen = HashSet::new();
    for &k in full.iter().chain(reduced) {
        if seen.insert(k) {
            joint.push(k);
        }
    }
    let rank = |idx: &[usize]| -> Result<usize, FrameError> {
        let vectors: Vec<&V> = idx.iter().map(|&k| &system.vectors[k]).collect();
        let g = gram_refs(&vectors)?;
        Ok(linalg::numerical_rank(&g, DEFAULT_REL_TOL)?)
    };
    Ok(SpanCheck {
        joint_rank: rank(&joint)?,
        reduced_rank: rank(reduced)?,
    })
}

fn gram_refs<V: HilbertVector>(vectors: &[&V]) -> Result<ComplexDenseMatrix, FrameError> {
    let n = vectors.len();
    if n > DEFAULT_GRAM_CAP {
        return Err(FrameError::TooLarge {
            len: n,
            cap: DEFAULT_GRAM_CAP,
        });
    }
    let mut m = ComplexDenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = vectors[j].inner(vectors[i]);
        }
    }
    Ok(m.hermitian_part())
}

/// Factorisation of an index set as `Λ × Γ_[g]`.
///
/// `members[k] = (system index, representative slot, stabiliser slot)`;
/// `representatives[r]` is the system index of the vector `π(λ_r)g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tiling {
    pub representatives: Vec<usize>,
    pub members: Vec<(usize, usize, usize)>,
    pub stab_order: usize,
}

impl Tiling {
    /// Every representative appears with every stabiliser slot exactly once,
    /// and the stabiliser-slot-zero member of each coset is the
    /// representative itself.
    pub fn validate(&self) -> Result<(), FrameError> {
        let k = self.stab_order;
        if k == 0 {
            return Err(FrameError::Tiling("stabiliser order must be positive".into()));
        }
        if self.members.len() != self.representatives.len() * k {
            return Err(FrameError::Tiling(format!(
                "{} members for {} representatives of cosets of size {k}",
                self.members.len(),
                self.representatives.len()
            )));
        }
        let mut seen = HashSet::new();
        let mut seen_index = HashSet::new();
        for &(idx, r, s) in &self.members {
            if r >= self.representatives.len() || s >= k {
                return Err(FrameError::Tiling(format!("slot ({r}, {s}) out of range")));
            }
            if !seen.insert((r, s)) {
                return Err(FrameError::Tiling(format!("factorisation ({r}, {s}) repeated")));
            }
            if !seen_index.insert(idx) {
                return Err(FrameError::Tiling(format!("index {idx} factorised twice")));
            }
            if s == 0 && idx != self.representatives[r] {
                return Err(FrameError::Tiling(format!(
                    "coset {r} does not start at its representative"
                )));
            }
        }
        Ok(())
    }

    pub fn full_indices(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.0).collect()
    }
}

/// `‖S_Γ − k S_Λ‖_F / ‖S_Γ‖_F` with both frame operators compressed to the
/// span of the probes (`⟨S p_q, p_p⟩ = (C C*)[p][q]`).
pub fn check_s_relation<V: HilbertVector>(
    system: &OrbitSystem<V>,
    tiling: &Tiling,
    probes: &[V],
) -> Result<f64, FrameError> {
    tiling.validate()?;
    let full = cross_matrix(probes, system, &tiling.full_indices());
    let reduced = cross_matrix(probes, system, &tiling.representatives);
    let s_full = full.matmul(&full.adjoint());
    let s_reduced = reduced.matmul(&reduced.adjoint());
    let norm = s_full.frobenius_norm();
    if norm == 0.0 {
        return Err(FrameError::ZeroOperator);
    }
    Ok(s_full.sub(&s_reduced.scale(tiling.stab_order as f64)).frobenius_norm() / norm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParsevalCheck {
    /// Largest `| ‖S_Γ^{-1/2} π(λγ′)g‖² − ‖S_Λ^{-1/2} π(λ)g‖² / |Γ_[g]| |`.
    pub max_deviation: f64,
    /// `‖S_Γ^{-1/2} g‖²`.
    pub generator_parseval_norm_sq: f64,
    /// Deviation of `‖S_Γ^{-1/2} g‖²` from the supplied `vol·d`, when the
    /// full system spans the ambient space.
    pub calibration_deviation: Option<f64>,
}

/// Compares canonical Parseval norms of the full and reduced systems.
///
/// `generator` is the system index of `g` itself; `vol_times_d` is checked
/// against `‖S_Γ^{-1/2} g‖²` only when `π(Γ)g` spans the ambient space.
pub fn parseval_norm_check(
    system: &OrbitSystem<CVector>,
    tiling: &Tiling,
    generator: usize,
    vol_times_d: Option<f64>,
) -> Result<ParsevalCheck, FrameError> {
    tiling.validate()?;
    let s_full = frame_operator(system, &tiling.full_indices())?;
    let s_reduced = frame_operator(system, &tiling.representatives)?;
    if s_full.frobenius_norm() == 0.0 {
        return Err(FrameError::ZeroOperator);
    }
    let r_full = inverse_sqrt_psd(&s_full, DEFAULT_REL_TOL)?;
    let r_reduced = inverse_sqrt_psd(&s_reduced, DEFAULT_REL_TOL)?;
    let norm_sq = |r: &ComplexDenseMatrix, k: usize| -> f64 {
        r.mul_vec(&system.vectors[k].0).iter().map(|z| z.norm_sqr()).sum()
    };
    let k = tiling.stab_order as f64;
    let mut max_deviation = 0.0_f64;
    for &(idx, r, _) in &tiling.members {
        let lhs = norm_sq(&r_full, idx);
        let rhs = norm_sq(&r_reduced, tiling.representatives[r]) / k;
        max_deviation = max_deviation.max((lhs - rhs).abs());
    }
    let generator_parseval_norm_sq = norm_sq(&r_full, generator);
    let spans = linalg::numerical_rank(&s_full, DEFAULT_REL_TOL)? == s_full.rows();
    let calibration_deviation = match (vol_times_d, spans) {
        (Some(v), true) => Some((generator_parseval_norm_sq - v).abs()),
        _ => None,
    };
    Ok(ParsevalCheck {
        max_deviation,
        generator_parseval_norm_sq,
        calibration_deviation,
    })
}

/// `max |⟨v_λ, S⁻¹ v_λ′⟩ − δ_{λλ′}|` for explicit vectors, with `S⁻¹` the
/// inverse of the frame operator on the span.
pub fn biorthogonality_check(system: &OrbitSystem<CVector>) -> Result<f64, FrameError> {
    let g = gram(system)?;
    let rank = linalg::numerical_rank(&g.matrix, DEFAULT_REL_TOL)?;
    if rank < system.len() {
        return Err(FrameError::NotRiesz {
            rank,
            len: system.len(),
        });
    }
    let s = frame_operator(system, &all_indices(system))?;
    let s_inv = pseudo_inverse_psd(&s, DEFAULT_REL_TOL)?;
    let duals: Vec<CVector> = system.vectors.iter().map(|v| CVector(s_inv.mul_vec(&v.0))).collect();
    let mut worst = 0.0_f64;
    for (i, v) in system.vectors.iter().enumerate() {
        for (j, dual) in duals.iter().enumerate() {
            let delta = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((v.inner(dual) - delta).norm());
        }
    }
    Ok(worst)
}

/// Outcome of `A·vol ≤ d⁻¹‖g‖² ≤ B·vol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichVerdict {
    /// `d⁻¹‖g‖² − A·vol`.
    pub lower_slack: f64,
    /// `B·vol − d⁻¹‖g‖²`.
    pub upper_slack: f64,
    /// Absolute tolerance applied to both slacks (`1e-9` times the largest
    /// of the three quantities).
    pub tolerance: f64,
    pub holds: bool,
}

pub fn lemma_sandwich_check(a: f64, b: f64, vol: f64, d: f64, g_norm_sq: f64) -> SandwichVerdict {
    let middle = g_norm_sq / d;
    let lower = a * vol;
    let upper = b * vol;
    let tolerance = 1e-9 * lower.abs().max(upper.abs()).max(middle.abs());
    let lower_slack = middle - lower;
    let upper_slack = upper - middle;
    SandwichVerdict {
        lower_slack,
        upper_slack,
        tolerance,
        holds: lower_slack >= -tolerance && upper_slack >= -tolerance,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every hypothesis is decided exactly; failures are theorem violations.
    Exact,
    /// Decisions come from finite sections; failures are flagged only.
    Numerical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not_applicable",
        }
    }
}

/// Inputs for [`density_verdict`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityInputs {
    pub mode: Mode,
    pub frame_estimate: Option<(f64, f64)>,
    pub riesz_extremes: Option<(f64, f64)>,
    pub stab_order: usize,
    pub covolume: f64,
    pub formal_degree: f64,
    /// Whether `π(Γ)g` is (consistent with) a frame for the whole space.
    pub is_frame: bool,
    /// Whether `π(Λ)g` is (consistent with) a Riesz sequence.
    pub is_riesz: bool,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub step: Option<usize>,
    pub truncation_radius: Option<f64>,
    pub index_count: Option<usize>,
    pub probe_count: Option<usize>,
    pub formal_degree_error: Option<f64>,
    pub covolume_error: Option<f64>,
    pub note: Option<String>,
}

/// Flat record of one density evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameReport {
    pub schema_version: u32,
    pub mode: Mode,
    pub step: Option<usize>,
    pub truncation_radius: Option<f64>,
    pub index_count: Option<usize>,
    pub probe_count: Option<usize>,
    pub frame_lower_estimate: Option<f64>,
    pub frame_upper_estimate: Option<f64>,
    pub riesz_min: Option<f64>,
    pub riesz_max: Option<f64>,
    pub stab_order: usize,
    pub covolume: f64,
    pub covolume_error: Option<f64>,
    pub formal_degree: f64,
    pub formal_degree_error: Option<f64>,
    pub density_product: f64,
    pub stabilizer_bound: f64,
    pub is_frame: bool,
    pub is_riesz: bool,
    pub verdict_frame: Verdict,
    pub verdict_riesz: Verdict,
    /// Set in numerical mode when a verdict fails on a finite section.
    pub flagged: bool,
    pub note: Option<String>,
}

/// Evaluates both density inequalities against `1/|Γ_[g]|`.
///
/// Comparisons carry a relative slack of `1e-12`. In exact mode a failed
/// verdict is returned as [`FrameError::TheoremViolation`]; in numerical
/// mode it is reported with `flagged` set.
pub fn density_verdict(inputs: &DensityInputs) -> Result<FrameReport, FrameError> {
    if inputs.stab_order == 0 {
        return Err(FrameError::InvalidInput("stabiliser order must be at least 1".into()));
    }
    if !(inputs.covolume > 0.0 && inputs.formal_degree > 0.0) {
        return Err(FrameError::InvalidInput(
            "covolume and formal degree must be positive".into(),
        ));
    }
    if let Some((a, b)) = inputs.frame_estimate {
        if a > b {
            return Err(FrameError::InvalidInput(format!(
                "frame estimates out of order: {a} > {b}"
            )));
        }
    }
    let density = inputs.covolume * inputs.formal_degree;
    let bound = 1.0 / inputs.stab_order as f64;
    let slack = 1e-12 * bound;
    let verdict_frame = if !inputs.is_frame {
        Verdict::NotApplicable
    } else if density <= bound + slack {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let verdict_riesz = if !inputs.is_riesz {
        Verdict::NotApplicable
    } else if density >= bound - slack {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    let failed = verdict_frame == Verdict::Fail || verdict_riesz == Verdict::Fail;
    if failed && inputs.mode == Mode::Exact {
        return Err(FrameError::TheoremViolation(format!(
            "density product {density} against 1/|Γ_[g]| = {bound} (frame: {}, riesz: {})",
            verdict_frame.as_str(),
            verdict_riesz.as_str()
        )));
    }
    let d = &inputs.diagnostics;
    Ok(FrameReport {
        schema_version: REPORT_SCHEMA_VERSION,
        mode: inputs.mode,
        step: d.step,
        truncation_radius: d.truncation_radius,
        index_count: d.index_count,
        probe_count: d.probe_count,
        frame_lower_estimate: inputs.frame_estimate.map(|e| e.0),
        frame_upper_estimate: inputs.frame_estimate.map(|e| e.1),
        riesz_min: inputs.riesz_extremes.map(|e| e.0),
        riesz_max: inputs.riesz_extremes.map(|e| e.1),
        stab_order: inputs.stab_order,
        covolume: inputs.covolume,
        covolume_error: d.covolume_error,
        formal_degree: inputs.formal_degree,
        formal_degree_error: d.formal_degree_error,
        density_product: density,
        stabilizer_bound: bound,
        is_frame: inputs.is_frame,
        is_riesz: inputs.is_riesz,
        verdict_frame,
        verdict_riesz,
        flagged: failed,
        note: d.note.clone(),
    })
}

/// Full spectrum of the frame operator of explicit vectors, ascending.
pub fn frame_operator_spectrum(system: &OrbitSystem<CVector>) -> Result<Vec<f64>, FrameError> {
    let s = frame_operator(system, &all_indices(system))?;
    Ok(hermitian_eigen(&s)?.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn explicit(vectors: Vec<Vec<f64>>) -> OrbitSystem<CVector> {
        let n = vectors[0].len();
        let labels = (0..vectors.len()).map(|k| k.to_string()).collect();
        let vs: Vec<CVector> = vectors
            .into_iter()
            .map(|v| CVector(v.into_iter().map(c).collect()))
            .collect();
        let g = vs[0].norm_sq();
        OrbitSystem::new(labels, vs, g, Ambient::Finite(n))
    }

    #[test]
    fn gram_examples() {
        let g = gram(&explicit(vec![vec![1., 0., 0.], vec![0., 1., 0.], vec![0., 0., 1.]])).unwrap();
        assert_eq!(g.matrix, ComplexDenseMatrix::identity(3));
        let g = gram(&explicit(vec![vec![1., 0.], vec![1., 0.]])).unwrap();
        assert_eq!(g.matrix, ComplexDenseMatrix::from_real_rows(&[&[1., 1.], &[1., 1.]]));
    }

    #[test]
    fn gram_rejects_zero_vector() {
        let r = gram(&explicit(vec![vec![1., 0.], vec![0., 0.]]));
        assert!(matches!(r, Err(FrameError::OracleInconsistency(_))));
    }

    #[test]
    fn riesz_examples() {
        let g = gram(&explicit(vec![vec![1., 0.], vec![0., 1.]])).unwrap();
        assert_eq!(riesz_extremes(&g).unwrap(), (1.0, 1.0));
        let g = gram(&explicit(vec![vec![1., 0.], vec![1., 0.], vec![0., 1.]])).unwrap();
        let (lo, hi) = riesz_extremes(&g).unwrap();
        assert!(lo.abs() < 1e-15 && (hi - 2.0).abs() < 1e-14);
    }

    #[test]
    fn frame_examples() {
        let (a, b) = frame_extremes_finite(&explicit(vec![vec![1., 0.], vec![0., 1.]])).unwrap();
        assert_eq!((a, b), (1.0, 1.0));
        let (a, b) = frame_extremes_finite(&explicit(vec![vec![1., 0.], vec![1., 0.], vec![0., 1.]])).unwrap();
        assert!((a - 1.0).abs() < 1e-15 && (b - 2.0).abs() < 1e-15);
        let (a, b) = frame_extremes_finite(&explicit(vec![vec![1., 0.]])).unwrap();
        assert_eq!((a, b), (0.0, 1.0));
    }

    #[test]
    fn probe_single_generator() {
        let sys = explicit(vec![vec![3., 4.]]);
        let est = frame_bounds_probe(&sys, &sys.vectors).unwrap();
        assert!((est.lower - 25.0).abs() < 1e-12 && (est.upper - 25.0).abs() < 1e-12);
    }

    #[test]
    fn probe_matches_frame_operator_complex() {
        let z = |re: f64, im: f64| Complex64::new(re, im);
        let vs = vec![
            CVector(vec![z(1.0, 0.5), z(0.0, -1.0)]),
            CVector(vec![z(0.3, 0.0), z(2.0, 1.0)]),
            CVector(vec![z(0.0, 1.0), z(1.0, 0.0)]),
        ];
        let sys = OrbitSystem::new(vec!["a".into(), "b".into(), "c".into()], vs, 1.25, Ambient::Finite(2));
        let (a, b) = frame_extremes_finite(&sys).unwrap();
        let probes = vec![
            CVector(vec![z(1.0, 1.0), z(0.5, 0.0)]),
            CVector(vec![z(0.0, 0.0), z(0.2, -1.0)]),
        ];
        let est = frame_bounds_probe(&sys, &probes).unwrap();
        assert!((est.lower - a).abs() < 1e-10 && (est.upper - b).abs() < 1e-10);
    }

    #[test]
    fn probe_standard_basis_matches_frame_operator() {
        let sys = explicit(vec![
            vec![1., 0.5, 0.],
            vec![0., 1., 2.],
            vec![1., 1., 1.],
            vec![0.3, 0., 1.],
        ]);
        let (a, b) = frame_extremes_finite(&sys).unwrap();
        let est = frame_bounds_probe(&sys, &CVector::standard_basis(3)).unwrap();
        assert!((est.lower - a).abs() < 1e-8 && (est.upper - b).abs() < 1e-8);
    }

    #[test]
    fn biorthogonality_small() {
        let sys = explicit(vec![vec![1., 0.], vec![1., 1.]]);
        assert!(biorthogonality_check(&sys).unwrap() < 1e-12);
        let dependent = explicit(vec![vec![1., 0.], vec![2., 0.]]);
        assert!(matches!(
            biorthogonality_check(&dependent),
            Err(FrameError::NotRiesz { rank: 1, len: 2 })
        ));
    }

    #[test]
    fn tiling_validation() {
        let good = Tiling {
            representatives: vec![0, 2],
            members: vec![(0, 0, 0), (1, 0, 1), (2, 1, 0), (3, 1, 1)],
            stab_order: 2,
        };
        assert!(good.validate().is_ok());
        let missing = Tiling {
            members: vec![(0, 0, 0), (1, 0, 1), (2, 1, 0)],
            ..good.clone()
        };
        assert!(matches!(missing.validate(), Err(FrameError::Tiling(_))));
        let repeated = Tiling {
            members: vec![(0, 0, 0), (1, 0, 1), (2, 1, 0), (3, 1, 0)],
            ..good
        };
        assert!(matches!(repeated.validate(), Err(FrameError::Tiling(_))));
    }

    #[test]
    fn s_relation_trivial_stabilizer_is_exact() {
        let sys = explicit(vec![vec![1., 0.5], vec![0.2, 1.]]);
        let tiling = Tiling {
            representatives: vec![0, 1],
            members: vec![(0, 0, 0), (1, 1, 0)],
            stab_order: 1,
        };
        assert_eq!(
            check_s_relation(&sys, &tiling, &CVector::standard_basis(2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn sandwich_examples() {
        assert!(lemma_sandwich_check(1.0, 1.0, 0.5, 2.0, 1.0).holds);
        let v = lemma_sandwich_check(3.0, 4.0, 1.0, 1.0, 2.0);
        assert!(!v.holds && v.lower_slack < 0.0);
    }

    #[test]
    fn density_verdict_exact_violation_is_error() {
        let inputs = DensityInputs {
            mode: Mode::Exact,
            frame_estimate: Some((1.0, 1.0)),
            riesz_extremes: None,
            stab_order: 2,
            covolume: 1.0,
            formal_degree: 1.0,
            is_frame: true,
            is_riesz: false,
            diagnostics: Diagnostics::default(),
        };
        assert!(matches!(density_verdict(&inputs), Err(FrameError::TheoremViolation(_))));
        let numerical = DensityInputs {
            mode: Mode::Numerical,
            ..inputs
        };
        let report = density_verdict(&numerical).unwrap();
        assert!(report.flagged && report.verdict_frame == Verdict::Fail);
    }

    #[test]
    fn density_verdict_rejects_bad_input() {
        let inputs = DensityInputs {
            mode: Mode::Numerical,
            frame_estimate: Some((2.0, 1.0)),
            riesz_extremes: None,
            stab_order: 1,
            covolume: 1.0,
            formal_degree: 1.0,
            is_frame: false,
            is_riesz: false,
            diagnostics: Diagnostics::default(),
        };
        assert!(matches!(density_verdict(&inputs), Err(FrameError::InvalidInput(_))));
        let zero = DensityInputs {
            stab_order: 0,
            frame_estimate: None,
            ..inputs
        };
        assert!(density_verdict(&zero).is_err());
    }
}
