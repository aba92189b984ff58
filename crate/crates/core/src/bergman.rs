//! Weighted Bergman spaces on the upper half-plane and the holomorphic
//! discrete series acting on them.
//!
//! The space `A²_α` consists of holomorphic functions on `ℂ⁺` that are
//! square integrable against `y^{α-2} dx dy`. It has reproducing kernels
//!
//! ```text
//! k_z(w) = c_α · i^α · (w - conj z)^{-α},    c_α = 2^{α-2} (α - 1) / π,
//! ```
//!
//! and PSL(2,ℝ) acts projectively through `π(m)f(w) = j(m⁻¹, w)^α f(m⁻¹·w)`
//! with `j(m, w) = (cw + d)^{-1}`. On kernels the action is closed form:
//! `π(m)k_z = σ(m, m⁻¹) · conj(j(m, z)^α) · k_{m·z}`, so every inner product
//! of an orbit `π(Γ)k_z` reduces to kernel evaluations.
//!
//! All complex powers use the principal branch.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frames::{
    self, Ambient, DensityInputs, Diagnostics, FrameError, FrameReport, HilbertVector, Mode, OrbitSystem, Tiling,
};
use crate::fuchsian::{
    self, ball_enumerate, coset_representatives, stabilizer_of_point, GroupBall, GroupError, LatticeSpec,
};
use crate::hyperbolic::{
    geodesic_polar_point, GridRegion, MoebiusKey, MoebiusMap, QuadratureError, QuadratureGrid, UpperHalfPoint,
};

/// Default relative tolerance for projective-stabiliser membership.
pub const DEFAULT_KERNEL_STABILIZER_TOL: f64 = 1e-9;

/// Largest radius used by the default formal-degree grid.
pub const MAX_DEFAULT_RADIUS: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BergmanError {
    #[error("weight must satisfy α > 1, got {0}")]
    InvalidWeight(f64),
    #[error("kernels of different weights ({0} and {1}) cannot be paired")]
    WeightMismatch(f64, f64),
    #[error("Haar scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("quadrature error estimate {estimate:e} exceeds tolerance {tolerance:e} (value {value})")]
    Accuracy { value: f64, estimate: f64, tolerance: f64 },
    #[error("kernel stabiliser disagrees with point stabiliser: {0}")]
    Consistency(String),
    #[error("invalid study parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// Weight `α > 1` of the Bergman space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Weight(f64);

impl Weight {
    pub fn new(alpha: f64) -> Result<Self, BergmanError> {
        if alpha.is_finite() && alpha > 1.0 {
            Ok(Self(alpha))
        } else {
            Err(BergmanError::InvalidWeight(alpha))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.0
    }

    /// `2^{α-2} (α - 1) / π`.
    pub fn kernel_constant(&self) -> f64 {
        let a = self.0;
        2f64.powf(a - 2.0) * (a - 1.0) / PI
    }
}

/// Principal power `w^α`.
pub fn principal_pow(w: Complex64, alpha: f64) -> Complex64 {
    let (r, theta) = w.to_polar();
    Complex64::from_polar(r.powf(alpha), theta * alpha)
}

/// The reproducing kernel at `z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelVector {
    pub z: UpperHalfPoint,
    pub weight: Weight,
}

impl KernelVector {
    pub fn new(z: UpperHalfPoint, weight: Weight) -> Self {
        Self { z, weight }
    }
}

/// `coefficient · k_z`, the image of a kernel under the representation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransformedKernel {
    pub base: KernelVector,
    pub coefficient: Complex64,
}

impl From<KernelVector> for TransformedKernel {
    fn from(base: KernelVector) -> Self {
        Self {
            base,
            coefficient: Complex64::new(1.0, 0.0),
        }
    }
}

impl TransformedKernel {
    pub fn norm_sq(&self) -> f64 {
        self.coefficient.norm_sqr() * kernel_norm_sq(&self.base)
    }

    /// Value of `coefficient · k_z` at `w`.
    pub fn eval(&self, w: UpperHalfPoint) -> Complex64 {
        self.coefficient * kernel_eval(&self.base, w)
    }
}

impl HilbertVector for TransformedKernel {
    fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.base.weight, other.base.weight);
        self.coefficient * other.coefficient.conj() * kernel_pairing(&self.base, &other.base)
    }
}

/// `k_z(w)`.
pub fn kernel_eval(k: &KernelVector, w: UpperHalfPoint) -> Complex64 {
    let alpha = k.weight.alpha();
    let i_alpha = Complex64::from_polar(1.0, PI * alpha / 2.0);
    let shift = w.to_complex() - k.z.to_complex().conj();
    k.weight.kernel_constant() * i_alpha / principal_pow(shift, alpha)
}

fn kernel_pairing(k1: &KernelVector, k2: &KernelVector) -> Complex64 {
    kernel_eval(k1, k2.z)
}

/// `⟨k_{z1}, k_{z2}⟩ = k_{z1}(z2)`.
pub fn kernel_inner(k1: &KernelVector, k2: &KernelVector) -> Result<Complex64, BergmanError> {
    check_weights(k1.weight, k2.weight)?;
    Ok(kernel_pairing(k1, k2))
}

/// `‖k_z‖² = k_z(z)`, the real part of the diagonal value.
pub fn kernel_norm_sq(k: &KernelVector) -> f64 {
    kernel_eval(k, k.z).re
}

fn check_weights(a: Weight, b: Weight) -> Result<(), BergmanError> {
    if a == b {
        Ok(())
    } else {
        Err(BergmanError::WeightMismatch(a.alpha(), b.alpha()))
    }
}

/// `σ(x, y)` with `π(x)π(y) = σ(x, y) π(xy)`, evaluated at the reference
/// point `i`.
pub fn sigma_cocycle(x: &MoebiusMap, y: &MoebiusMap, weight: Weight) -> Complex64 {
    sigma_cocycle_at(x, y, weight, UpperHalfPoint::i())
}

/// `σ(x, y) = j(x⁻¹, z₀)^α · j(y⁻¹, x⁻¹·z₀)^α / j((xy)⁻¹, z₀)^α`. The value
/// does not depend on `z₀`.
pub fn sigma_cocycle_at(x: &MoebiusMap, y: &MoebiusMap, weight: Weight, z0: UpperHalfPoint) -> Complex64 {
    let alpha = weight.alpha();
    let xi = x.inverse();
    let yi = y.inverse();
    let xyi = x.compose(y).inverse();
    let num = principal_pow(xi.j_factor(z0), alpha) * principal_pow(yi.j_factor(xi.act(z0)), alpha);
    num / principal_pow(xyi.j_factor(z0), alpha)
}

/// `π(m)k_z = σ(m, m⁻¹) · conj(j(m, z)^α) · k_{m·z}`.
pub fn apply_pi(m: &MoebiusMap, k: &KernelVector) -> TransformedKernel {
    let sigma = sigma_cocycle(m, &m.inverse(), k.weight);
    let j_pow = principal_pow(m.j_factor(k.z), k.weight.alpha());
    TransformedKernel {
        base: KernelVector::new(m.act(k.z), k.weight),
        coefficient: sigma * j_pow.conj(),
    }
}

/// `π(m)` applied to a scaled kernel.
pub fn apply_pi_transformed(m: &MoebiusMap, t: &TransformedKernel) -> TransformedKernel {
    let image = apply_pi(m, &t.base);
    TransformedKernel {
        base: image.base,
        coefficient: image.coefficient * t.coefficient,
    }
}

/// `⟨c₁ k_{w1}, c₂ k_{w2}⟩ = c₁ conj(c₂) ⟨k_{w1}, k_{w2}⟩`.
pub fn orbit_inner(g1: &TransformedKernel, g2: &TransformedKernel) -> Result<Complex64, BergmanError> {
    check_weights(g1.base.weight, g2.base.weight)?;
    Ok(g1.inner(g2))
}

/// Formal-degree value with discretisation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormalDegreeEstimate {
    pub value: f64,
    /// Richardson estimate `|d_fine - d_coarse| / 3` plus the modelled mass
    /// beyond the grid radius.
    pub error_estimate: f64,
    /// Value on the half-resolution grid.
    pub coarse_value: f64,
    /// `‖g‖⁻⁴ ∫ |⟨g, π(x)g⟩|² dμ_G(x)` at Haar scale one.
    pub integral: f64,
    pub resolution: (usize, usize),
}

/// Radius beyond which the correlation mass is negligible for weight `α`.
pub fn default_radius(weight: Weight) -> f64 {
    let a = weight.alpha();
    (2.0 * 2f64.ln() + 25.0 / (a - 1.0)).min(MAX_DEFAULT_RADIUS)
}

/// Polar grid around `centre` of radius [`default_radius`].
pub fn default_formal_degree_grid(
    weight: Weight,
    centre: UpperHalfPoint,
    resolution: (usize, usize),
) -> Result<QuadratureGrid, BergmanError> {
    Ok(QuadratureGrid::new(
        GridRegion::Polar {
            centre,
            r_max: default_radius(weight),
        },
        resolution,
    )?)
}

/// Formal degree from the orthogonality relation
/// `∫_G |⟨g, π(x)g⟩|² dμ_G(x) = d⁻¹ ‖g‖⁴` with `g = k_{z₀}`.
///
/// The integrand depends on `x` only through `x·z₀`, and the compact factor
/// of the Haar measure has mass one, so the group integral is an integral
/// over `ℂ⁺` against `y⁻² dx dy`. At each node `z` the element used is the
/// affine map sending `z₀` to `z`. The Haar measure is multiplied by
/// `haar_scale`, which divides the result.
///
/// With `tolerance` set, a relative error estimate above it is an
/// [`BergmanError::Accuracy`] error.
pub fn formal_degree(
    weight: Weight,
    grid: &QuadratureGrid,
    generator: UpperHalfPoint,
    haar_scale: f64,
    tolerance: Option<f64>,
) -> Result<FormalDegreeEstimate, BergmanError> {
    if !(haar_scale > 0.0 && haar_scale.is_finite()) {
        return Err(BergmanError::InvalidScale(haar_scale));
    }
    let g = KernelVector::new(generator, weight);
    let g_t = TransformedKernel::from(g);
    let norm_sq = kernel_norm_sq(&g);
    let to_origin = MoebiusMap::affine_to(generator).inverse();
    let integrand = |z: UpperHalfPoint| {
        let m = MoebiusMap::affine_to(z).compose(&to_origin);
        let image = apply_pi(&m, &g);
        g_t.inner(&image).norm_sqr() / (norm_sq * norm_sq)
    };
    let fine = grid.integrate(integrand)?;
    let coarse = grid.coarsened()?.integrate(integrand)?;
    let tail = match grid.region() {
        GridRegion::Polar { r_max, .. } => {
            let a = weight.alpha();
            PI * 4f64.powf(a) * (-(a - 1.0) * r_max).exp() / (a - 1.0)
        }
        _ => 0.0,
    };
    let value = 1.0 / (haar_scale * fine);
    let coarse_value = 1.0 / (haar_scale * coarse);
    let error_estimate = (value - coarse_value).abs() / 3.0 + value * tail / fine;
    if let Some(tol) = tolerance {
        if error_estimate > tol * value {
            return Err(BergmanError::Accuracy {
                value,
                estimate: error_estimate,
                tolerance: tol * value,
            });
        }
    }
    Ok(FormalDegreeEstimate {
        value,
        error_estimate,
        coarse_value,
        integral: fine,
        resolution: grid.resolution(),
    })
}

/// Phase function `u(γ) = ⟨π(γ)g, g⟩ / ‖g‖²` on a projective stabiliser.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunction {
    pub entries: Vec<(MoebiusMap, Complex64)>,
}

impl PhaseFunction {
    pub fn get(&self, m: &MoebiusMap) -> Option<Complex64> {
        let key = m.key();
        self.entries.iter().find(|(g, _)| g.key() == key).map(|e| e.1)
    }

    /// Largest `| |u(γ)| - 1 |`.
    pub fn max_modulus_deviation(&self) -> f64 {
        self.entries
            .iter()
            .map(|(_, u)| (u.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Projective stabiliser of a kernel within a ball.
#[derive(Debug, Clone)]
pub struct KernelStabilizer {
    pub elements: Vec<MoebiusMap>,
    pub phases: PhaseFunction,
}

impl KernelStabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Hyperbolic distance `δ` with `cosh(δ/2)^{-α} = 1 - tol`, clamped to the
/// range accepted by [`stabilizer_of_point`].
///
/// Since `|⟨π(γ)k_z, k_z⟩| / ‖k_z‖² = cosh(d(γ·z, z)/2)^{-α}`, the kernel
/// criterion at `tol` and the point criterion at this distance select the
/// same elements.
pub fn distance_tolerance_for_kernel(tol: f64, weight: Weight) -> f64 {
    let c = (1.0 - tol).powf(-1.0 / weight.alpha());
    (2.0 * c.acosh()).clamp(f64::MIN_POSITIVE, 1e-4)
}

/// Inverse of [`distance_tolerance_for_kernel`]: `1 - cosh(δ/2)^{-α}`.
pub fn kernel_tolerance_for_distance(delta: f64, weight: Weight) -> f64 {
    1.0 - (delta / 2.0).cosh().powf(-weight.alpha())
}

/// All `γ` in the ball with `|⟨π(γ)k, k⟩| ≥ (1 - tol)‖k‖²`, cross-checked
/// for set equality against [`stabilizer_of_point`] at the matching distance
/// tolerance.
pub fn projective_stabilizer_kernel(
    ball: &GroupBall,
    k: &KernelVector,
    tol: f64,
) -> Result<KernelStabilizer, BergmanError> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(BergmanError::InvalidParameter(format!("stabiliser tolerance {tol}")));
    }
    let norm_sq = kernel_norm_sq(k);
    let g = TransformedKernel::from(*k);
    let mut elements = Vec::new();
    let mut entries = Vec::new();
    for gamma in ball.elements() {
        let ip = apply_pi(gamma, k).inner(&g);
        if ip.norm() >= (1.0 - tol) * norm_sq {
            elements.push(*gamma);
            entries.push((*gamma, ip / norm_sq));
        }
    }
    let point = stabilizer_of_point(ball, k.z, distance_tolerance_for_kernel(tol, k.weight))?;
    let mut ours: Vec<MoebiusKey> = elements.iter().map(MoebiusMap::key).collect();
    let mut theirs: Vec<MoebiusKey> = point.elements.iter().map(MoebiusMap::key).collect();
    ours.sort();
    theirs.sort();
    if ours != theirs {
        return Err(BergmanError::Consistency(format!(
            "kernel path found {} elements, point path {}",
            ours.len(),
            theirs.len()
        )));
    }
    Ok(KernelStabilizer {
        elements,
        phases: PhaseFunction { entries },
    })
}

/// Orbit `{π(γ)k : γ ∈ elements}` as a frame-analysis system.
pub fn kernel_orbit(elements: &[MoebiusMap], k: &KernelVector) -> OrbitSystem<TransformedKernel> {
    let labels = elements.iter().map(ToString::to_string).collect();
    let vectors = elements.iter().map(|m| apply_pi(m, k)).collect();
    OrbitSystem::new(labels, vectors, kernel_norm_sq(k), Ambient::Infinite)
}

/// `count` kernels spread over the hyperbolic disc of radius `radius`
/// around `centre` on a golden-angle spiral.
pub fn sunflower_probes(centre: UpperHalfPoint, count: usize, radius: f64, weight: Weight) -> Vec<TransformedKernel> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = radius * ((k as f64 + 0.5) / count as f64).sqrt();
            let phi = (k as f64 * golden).rem_euclid(2.0 * PI);
            TransformedKernel::from(KernelVector::new(geodesic_polar_point(centre, r, phi), weight))
        })
        .collect()
}

/// Parameters of a Bergman density study.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityStudyConfig {
    pub lattice: LatticeSpec,
    pub weight: Weight,
    pub z: UpperHalfPoint,
    /// Norm bound of the largest ball.
    pub ball: f64,
    /// Norm bounds of the refinement steps, increasing, the last equal to
    /// `ball`. Empty selects `ball - 2, ball - 1, ball` (clamped at `√2`).
    pub schedule: Vec<f64>,
    pub probes: usize,
    pub probe_radius: f64,
    pub haar_scale: f64,
    /// Relative floor for the probe lower estimate in the frame decision.
    pub frame_floor: f64,
    /// Relative floor for the Gram minimum in the Riesz decision.
    pub riesz_floor: f64,
    pub formal_degree_resolution: (usize, usize),
}

impl DensityStudyConfig {
    pub fn new(lattice: LatticeSpec, weight: Weight, z: UpperHalfPoint) -> Self {
        Self {
            lattice,
            weight,
            z,
            ball: 6.0,
            schedule: Vec::new(),
            probes: 40,
            probe_radius: 1.0,
            haar_scale: 1.0,
            frame_floor: 1e-6,
            riesz_floor: 1e-6,
            formal_degree_resolution: (400, 16),
        }
    }

    fn resolved_schedule(&self) -> Result<Vec<f64>, BergmanError> {
        let schedule = if self.schedule.is_empty() {
            let mut s: Vec<f64> = [self.ball - 2.0, self.ball - 1.0, self.ball]
                .into_iter()
                .map(|b| b.max(2f64.sqrt()))
                .collect();
            s.dedup();
            s
        } else {
            self.schedule.clone()
        };
        if schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(BergmanError::InvalidParameter(
                "schedule must be strictly increasing".into(),
            ));
        }
        if schedule.last() != Some(&self.ball) {
            return Err(BergmanError::InvalidParameter(
                "schedule must end at the ball bound".into(),
            ));
        }
        Ok(schedule)
    }
}

/// One refinement step of a density study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyStep {
    pub norm_bound: f64,
    pub orbit_size: usize,
    pub lambda_size: usize,
    pub probe: frames::ProbeEstimate,
    pub riesz: (f64, f64),
}

/// Result of [`density_study`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityStudy {
    pub covolume: fuchsian::Estimate,
    pub formal_degree: FormalDegreeEstimate,
    pub stab_order: usize,
    pub stabilizer_closed: bool,
    pub max_phase_deviation: f64,
    pub steps: Vec<StudyStep>,
    pub reports: Vec<FrameReport>,
    /// `‖S_Γ - |Γ_z| S_Λ‖ / ‖S_Γ‖` on the tiled part of the largest ball.
    pub s_relation_residual: f64,
    pub span_equal: bool,
    /// Probe minimum and maximum non-decreasing across steps.
    pub probe_trace_monotone: bool,
    /// Gram minimum non-increasing and maximum non-decreasing across steps.
    pub riesz_trace_monotone: bool,
    pub consistent_with_frame: bool,
    pub consistent_with_riesz: bool,
    /// True when no reported verdict failed.
    pub verdicts_consistent: bool,
}

const TRACE_SLACK: f64 = 1e-9;

fn non_decreasing(values: &[f64]) -> bool {
    values
        .windows(2)
        .all(|w| w[1] >= w[0] - TRACE_SLACK * w[0].abs().max(w[1].abs()))
}

/// Runs the density analysis of `π(Γ)k_z` over nested balls.
///
/// Each step restricts the largest ball to the step's norm bound, estimates
/// frame bounds of the full orbit against a fixed probe set, and computes
/// the Gram extremes of the orbit over the coset representatives `Λ`. The
/// orbit is declared consistent with a frame when the probe lower estimate
/// stays above `frame_floor` times the upper estimate at every step, and
/// consistent with a Riesz sequence when the Gram minimum stays above
/// `riesz_floor` times the Gram maximum at every step.
pub fn density_study(config: &DensityStudyConfig) -> Result<DensityStudy, BergmanError> {
    if !(config.haar_scale > 0.0 && config.haar_scale.is_finite()) {
        return Err(BergmanError::InvalidScale(config.haar_scale));
    }
    if config.probes == 0 || !(config.probe_radius > 0.0) {
        return Err(BergmanError::InvalidParameter(
            "probe count and radius must be positive".into(),
        ));
    }
    let schedule = config.resolved_schedule()?;
    let covolume = fuchsian::lattice_covolume(&config.lattice, config.haar_scale)?;
    let grid = default_formal_degree_grid(config.weight, config.z, config.formal_degree_resolution)?;
    let formal_degree = formal_degree(config.weight, &grid, config.z, config.haar_scale, None)?;

    let ball = ball_enumerate(&config.lattice, config.ball)?;
    let k = KernelVector::new(config.z, config.weight);
    let point_tol = distance_tolerance_for_kernel(DEFAULT_KERNEL_STABILIZER_TOL, config.weight);
    let point = stabilizer_of_point(&ball, config.z, point_tol)?;
    let kernel_stab = projective_stabilizer_kernel(&ball, &k, DEFAULT_KERNEL_STABILIZER_TOL)?;
    let stab_order = kernel_stab.order();
    let probes = sunflower_probes(config.z, config.probes, config.probe_radius, config.weight);

    let mut steps = Vec::new();
    let mut reports = Vec::new();
    for (step, &bound) in schedule.iter().enumerate() {
        let sub = ball.restrict(bound);
        let orbit = kernel_orbit(sub.elements(), &k);
        let probe = frames::frame_bounds_probe(&orbit, &probes)?;
        let cosets = coset_representatives(&sub, &kernel_stab.elements);
        let lambda = kernel_orbit(&cosets.representatives, &k);
        let riesz = frames::riesz_extremes(&frames::gram(&lambda)?)?;
        steps.push(StudyStep {
            norm_bound: bound,
            orbit_size: orbit.len(),
            lambda_size: lambda.len(),
            probe,
            riesz,
        });
        let is_frame = steps
            .iter()
            .all(|s| s.probe.lower >= config.frame_floor * s.probe.upper);
        let is_riesz = steps.iter().all(|s| s.riesz.0 >= config.riesz_floor * s.riesz.1);
        let inputs = DensityInputs {
            mode: Mode::Numerical,
            frame_estimate: Some((probe.lower, probe.upper)),
            riesz_extremes: Some(riesz),
            stab_order,
            covolume: covolume.value,
            formal_degree: formal_degree.value,
            is_frame,
            is_riesz,
            diagnostics: Diagnostics {
                step: Some(step),
                truncation_radius: Some(bound),
                index_count: Some(orbit.len()),
                probe_count: Some(probes.len()),
                formal_degree_error: Some(formal_degree.error_estimate),
                covolume_error: Some(covolume.error_estimate),
                note: Some("finite-section estimate; verdicts describe consistency only".into()),
            },
        };
        reports.push(frames::density_verdict(&inputs)?);
    }

    let cosets = coset_representatives(&ball, &kernel_stab.elements);
    let orbit = kernel_orbit(ball.elements(), &k);
    let tiled = cosets.tiled_elements();
    let complete = cosets.complete_representatives();
    let slot: std::collections::HashMap<usize, usize> = complete.iter().enumerate().map(|(s, &r)| (r, s)).collect();
    let tiling = Tiling {
        representatives: complete
            .iter()
            .map(|&r| cosets.coset_members[r][0].expect("complete"))
            .collect(),
        members: tiled.iter().map(|&(idx, r, s)| (idx, slot[&r], s)).collect(),
        stab_order: cosets.stabilizer.len(),
    };
    let s_relation_residual = frames::check_s_relation(&orbit, &tiling, &probes)?;
    let span = frames::check_span_equality(&orbit, &tiling.full_indices(), &tiling.representatives)?;

    let lows: Vec<f64> = steps.iter().map(|s| s.probe.lower).collect();
    let highs: Vec<f64> = steps.iter().map(|s| s.probe.upper).collect();
    let r_lows: Vec<f64> = steps.iter().map(|s| -s.riesz.0).collect();
    let r_highs: Vec<f64> = steps.iter().map(|s| s.riesz.1).collect();
    let last = reports.last().expect("non-empty schedule");
    Ok(DensityStudy {
        covolume,
        formal_degree,
        stab_order,
        stabilizer_closed: point.closed_in_ball,
        max_phase_deviation: kernel_stab.phases.max_modulus_deviation(),
        s_relation_residual,
        span_equal: span.equal(),
        probe_trace_monotone: non_decreasing(&lows) && non_decreasing(&highs),
        riesz_trace_monotone: non_decreasing(&r_lows) && non_decreasing(&r_highs),
        consistent_with_frame: last.is_frame,
        consistent_with_riesz: last.is_riesz,
        verdicts_consistent: reports.iter().all(|r| !r.flagged),
        steps,
        reports,
    })
}
