//! Time-frequency shifts on `ℂⁿ`: the finite Weyl–Heisenberg
//! representation of `ℤₙ × ℤₙ`.
//!
//! `π(a, b)` translates by `a` and then modulates by `b`:
//! `(π(a, b)v)_j = ω^{jb} v_{j-a}` with `ω = e^{2πi/n}`. The representation
//! is projective with cocycle `σ((a, b), (c, d)) = ω^{-ad}`, irreducible, and
//! square integrable for counting measure with formal degree `1/n`. Every
//! subgroup `Γ` is a lattice of covolume `n²/|Γ|`, so all density
//! statements can be checked exactly by dense linear algebra.

use std::collections::{BTreeSet, HashMap};
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::frames::{
    self, biorthogonality_check, check_s_relation, frame_operator, lemma_sandwich_check, parseval_norm_check, Ambient,
    CVector, FrameError, OrbitSystem, SandwichVerdict, Tiling, Verdict,
};
use crate::linalg::{self, ComplexDenseMatrix, DEFAULT_REL_TOL};

/// A pair `(a, b) ∈ ℤₙ × ℤₙ`.
pub type Shift = (usize, usize);

/// Largest modulus accepted by [`subgroup_enumerate`].
pub const MAX_SUBGROUP_MODULUS: usize = 12;

/// Largest modulus accepted by [`exhaustive_scan`].
pub const MAX_SCAN_MODULUS: usize = 8;

/// Tolerance on every proof identity checked by [`verify_theorem`].
pub const IDENTITY_TOL: f64 = 1e-10;

/// Tolerance on the slack of the frame-bound sandwich.
pub const SANDWICH_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GaborError {
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(usize),
    #[error("modulus {n} exceeds the supported maximum {max}")]
    ModulusTooLarge { n: usize, max: usize },
    #[error("vector of length {got} does not match modulus {n}")]
    LengthMismatch { n: usize, got: usize },
    #[error("window must be nonzero and finite")]
    BadWindow,
    #[error("element list is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("orthogonality relation fails: relative deviation {0:e}")]
    RepresentationBug(f64),
    #[error("stabiliser is inconsistent: {0}")]
    Inconsistent(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error("report output failed: {0}")]
    Output(String),
}

fn check_modulus(n: usize) -> Result<(), GaborError> {
    if n < 2 {
        Err(GaborError::ModulusTooSmall(n))
    } else {
        Ok(())
    }
}

fn omega_pow(n: usize, k: i64) -> Complex64 {
    let k = k.rem_euclid(n as i64) as f64;
    Complex64::from_polar(1.0, 2.0 * PI * k / n as f64)
}

/// `(π(a, b)v)_j = ω^{jb} v_{j-a}`.
pub fn pi_shift(n: usize, (a, b): Shift, v: &[Complex64]) -> Result<Vec<Complex64>, GaborError> {
    check_modulus(n)?;
    if v.len() != n {
        return Err(GaborError::LengthMismatch { n, got: v.len() });
    }
    Ok((0..n)
        .map(|j| omega_pow(n, (j * b) as i64) * v[(j + n - a % n) % n])
        .collect())
}

/// Matrix of `π(a, b)`.
pub fn shift_matrix(n: usize, (a, b): Shift) -> ComplexDenseMatrix {
    let mut m = ComplexDenseMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, (j + n - a % n) % n)] = omega_pow(n, (j * b) as i64);
    }
    m
}

/// `σ((a, b), (c, d)) = ω^{-ad}`, so that `π(x)π(y) = σ(x, y) π(x + y)`.
pub fn sigma_finite(n: usize, (a, _): Shift, (_, d): Shift) -> Complex64 {
    omega_pow(n, -((a * d) as i64))
}

pub fn add_shift(n: usize, (a, b): Shift, (c, d): Shift) -> Shift {
    ((a + c) % n, (b + d) % n)
}

fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(x, y)| x * y.conj()).sum()
}

fn norm_sq(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `Σ_{x ∈ ℤₙ²} |⟨f, π(x)g⟩|²`.
pub fn orthogonality_sum(n: usize, f: &[Complex64], g: &[Complex64]) -> Result<f64, GaborError> {
    let mut total = 0.0;
    for a in 0..n {
        for b in 0..n {
            total += inner(f, &pi_shift(n, (a, b), g)?).norm_sqr();
        }
    }
    Ok(total)
}

/// Gaussian random vector in `ℂⁿ`.
pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect()
}

/// Formal degree `1/n`, certified by the orthogonality sum
/// `Σ |⟨f, π(x)g⟩|² = n ‖f‖² ‖g‖²` on a few seeded random pairs.
pub fn formal_degree_finite(n: usize) -> Result<f64, GaborError> {
    check_modulus(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    for _ in 0..4 {
        let f = random_vector(n, &mut rng);
        let g = random_vector(n, &mut rng);
        let expected = n as f64 * norm_sq(&f) * norm_sq(&g);
        let dev = (orthogonality_sum(n, &f, &g)? - expected).abs() / expected;
        if dev > IDENTITY_TOL {
            return Err(GaborError::RepresentationBug(dev));
        }
    }
    Ok(1.0 / n as f64)
}

/// A subgroup of `ℤₙ × ℤₙ` with at most two generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupDescr {
    pub n: usize,
    pub generators: Vec<Shift>,
    /// Sorted lexicographically; `(0, 0)` first.
    pub elements: Vec<Shift>,
}

impl SubgroupDescr {
    /// Subgroup generated by `generators`.
    pub fn generated(n: usize, generators: &[Shift]) -> Result<Self, GaborError> {
        check_modulus(n)?;
        let mut set = BTreeSet::new();
        set.insert((0, 0));
        let mut frontier = vec![(0, 0)];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = add_shift(n, x, (g.0 % n, g.1 % n));
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(Self {
            n,
            generators: generators.to_vec(),
            elements: set.into_iter().collect(),
        })
    }

    /// Validates an explicit element list.
    pub fn from_elements(n: usize, elements: &[Shift]) -> Result<Self, GaborError> {
        check_modulus(n)?;
        let set: BTreeSet<Shift> = elements.iter().copied().collect();
        if set.len() != elements.len() {
            return Err(GaborError::NotSubgroup("duplicate elements".into()));
        }
        if set.iter().any(|&(a, b)| a >= n || b >= n) {
            return Err(GaborError::NotSubgroup("entries must be reduced modulo n".into()));
        }
        if !set.contains(&(0, 0)) {
            return Err(GaborError::NotSubgroup("missing (0, 0)".into()));
        }
        for &x in &set {
            for &y in &set {
                if !set.contains(&add_shift(n, x, y)) {
                    return Err(GaborError::NotSubgroup(format!("{x:?} + {y:?} missing")));
                }
            }
        }
        Ok(Self {
            n,
            generators: Vec::new(),
            elements: set.into_iter().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// The whole group `ℤₙ × ℤₙ`.
    pub fn full(n: usize) -> Result<Self, GaborError> {
        Self::generated(n, &[(1, 0), (0, 1)])
    }

    /// Generators as `(a,b);(c,d)`.
    pub fn generators_label(&self) -> String {
        self.generators
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

/// All subgroups of `ℤₙ × ℤₙ`, ordered by order and then element list.
pub fn subgroup_enumerate(n: usize) -> Result<Vec<SubgroupDescr>, GaborError> {
    check_modulus(n)?;
    if n > MAX_SUBGROUP_MODULUS {
        return Err(GaborError::ModulusTooLarge {
            n,
            max: MAX_SUBGROUP_MODULUS,
        });
    }
    let all: Vec<Shift> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut found: HashMap<Vec<Shift>, SubgroupDescr> = HashMap::new();
    let mut add = |gens: &[Shift]| -> Result<(), GaborError> {
        let s = SubgroupDescr::generated(n, gens)?;
        found.entry(s.elements.clone()).or_insert(s);
        Ok(())
    };
    add(&[])?;
    for &x in &all[1..] {
        add(&[x])?;
    }
    for (i, &x) in all.iter().enumerate().skip(1) {
        for &y in &all[i + 1..] {
            add(&[x, y])?;
        }
    }
    let mut out: Vec<SubgroupDescr> = found.into_values().collect();
    out.sort_by(|s, t| s.order().cmp(&t.order()).then_with(|| s.elements.cmp(&t.elements)));
    Ok(out)
}

/// A window together with a lattice of `ℤₙ × ℤₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGaborSystem {
    pub n: usize,
    pub window: Vec<Complex64>,
    pub subgroup: SubgroupDescr,
}

impl FiniteGaborSystem {
    pub fn new(window: Vec<Complex64>, subgroup: SubgroupDescr) -> Result<Self, GaborError> {
        let n = subgroup.n;
        if window.len() != n {
            return Err(GaborError::LengthMismatch { n, got: window.len() });
        }
        if window.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || norm_sq(&window) == 0.0 {
            return Err(GaborError::BadWindow);
        }
        Ok(Self { n, window, subgroup })
    }

    /// Orbit `π(x)g` over the given shifts.
    pub fn orbit(&self, shifts: &[Shift]) -> OrbitSystem<CVector> {
        let labels = shifts.iter().map(|(a, b)| format!("({a},{b})")).collect();
        let vectors = shifts
            .iter()
            .map(|&x| CVector(pi_shift(self.n, x, &self.window).expect("valid shift")))
            .collect();
        OrbitSystem::new(labels, vectors, norm_sq(&self.window), Ambient::Finite(self.n))
    }
}

/// Projective stabiliser `Γ_[g]` and its phases `u(γ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteStabilizer {
    pub subgroup: SubgroupDescr,
    pub phases: Vec<(Shift, Complex64)>,
}

impl FiniteStabilizer {
    pub fn order(&self) -> usize {
        self.subgroup.order()
    }
}

/// All `γ ∈ Γ` with `|⟨π(γ)g, g⟩| ≥ (1 - tol)‖g‖²`.
pub fn projective_stabilizer_finite(sys: &FiniteGaborSystem, tol: f64) -> Result<FiniteStabilizer, GaborError> {
    let g_norm = norm_sq(&sys.window);
    let mut elements = Vec::new();
    let mut phases = Vec::new();
    for &x in &sys.subgroup.elements {
        let ip = inner(&pi_shift(sys.n, x, &sys.window)?, &sys.window);
        if ip.norm() >= (1.0 - tol) * g_norm {
            elements.push(x);
            phases.push((x, ip / g_norm));
        }
    }
    let subgroup = SubgroupDescr::from_elements(sys.n, &elements)
        .map_err(|e| GaborError::Inconsistent(format!("not a subgroup ({e})")))?;
    if !sys.subgroup.order().is_multiple_of(subgroup.order()) {
        return Err(GaborError::Inconsistent(format!(
            "order {} does not divide {}",
            subgroup.order(),
            sys.subgroup.order()
        )));
    }
    Ok(FiniteStabilizer { subgroup, phases })
}

/// Lexicographically smallest element of each coset `λ + Γ_[g]`, with the
/// factorisation of every element of `Γ` as `(Γ index, representative
/// slot, stabiliser slot)`.
pub fn coset_representatives_finite(gamma: &SubgroupDescr, stab: &SubgroupDescr) -> (Vec<Shift>, Tiling) {
    let n = gamma.n;
    let position: HashMap<Shift, usize> = gamma.elements.iter().enumerate().map(|(k, &x)| (x, k)).collect();
    let mut assigned = vec![false; gamma.order()];
    let mut reps = Vec::new();
    let mut rep_idx = Vec::new();
    let mut members = Vec::new();
    for (k, &lambda) in gamma.elements.iter().enumerate() {
        if assigned[k] {
            continue;
        }
        let r = reps.len();
        reps.push(lambda);
        rep_idx.push(k);
        for (s, &h) in stab.elements.iter().enumerate() {
            let idx = position[&add_shift(n, lambda, h)];
            assigned[idx] = true;
            members.push((idx, r, s));
        }
    }
    (
        reps,
        Tiling {
            representatives: rep_idx,
            members,
            stab_order: stab.order(),
        },
    )
}

/// Everything [`verify_theorem`] computes for one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub n: usize,
    pub subgroup_order: usize,
    pub stab_order: usize,
    pub lambda_size: usize,
    pub lambda: Vec<Shift>,
    pub is_frame: bool,
    pub is_riesz: bool,
    pub frame_bounds: (f64, f64),
    pub riesz_extremes: (f64, f64),
    /// `vol · d = (n²/|Γ|)(1/n)`.
    pub vol_times_d: f64,
    /// `1/|Γ_[g]|`.
    pub bound: f64,
    pub verdict_frame: Verdict,
    pub verdict_riesz: Verdict,
    pub s_relation_residual: f64,
    pub parseval_deviation: f64,
    pub calibration_deviation: Option<f64>,
    pub biorthogonality_deviation: Option<f64>,
    pub sandwich: SandwichVerdict,
}

impl TheoremCheck {
    /// Largest deviation across the proof identities, with the sandwich
    /// counted by its most negative slack.
    pub fn max_identity_residual(&self) -> f64 {
        [
            self.s_relation_residual,
            self.parseval_deviation,
            self.calibration_deviation.unwrap_or(0.0),
            self.biorthogonality_deviation.unwrap_or(0.0),
            (-self.sandwich.lower_slack).max(0.0),
            (-self.sandwich.upper_slack).max(0.0),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks both density inequalities and every proof identity on one system.
///
/// The frame decision is whether `π(Γ)g` spans `ℂⁿ` and the Riesz decision
/// whether the Gram matrix of `π(Λ)g` is nonsingular, both at relative
/// rank tolerance `1e-9`. Any failed inequality or identity is returned as
/// [`GaborError::TheoremViolation`].
pub fn verify_theorem(sys: &FiniteGaborSystem) -> Result<TheoremCheck, GaborError> {
    let n = sys.n;
    let gamma = &sys.subgroup;
    let stab = projective_stabilizer_finite(sys, DEFAULT_REL_TOL)?;
    let k = stab.order();
    let (lambda, tiling) = coset_representatives_finite(gamma, &stab.subgroup);

    let full = sys.orbit(&gamma.elements);
    let frame_op = frame_operator(&full, &(0..full.len()).collect::<Vec<_>>())?;
    let spectrum = linalg::hermitian_eigenvalues(&frame_op)?;
    let is_frame = linalg::numerical_rank(&frame_op, DEFAULT_REL_TOL)? == n;
    let frame_bounds = (if is_frame { spectrum[0] } else { 0.0 }, spectrum[n - 1]);

    let reduced = sys.orbit(&lambda);
    let gram = frames::gram(&reduced)?;
    let riesz_extremes = frames::riesz_extremes(&gram)?;
    let is_riesz = linalg::numerical_rank(&gram.matrix, DEFAULT_REL_TOL)? == lambda.len();

    let vol = (n * n) as f64 / gamma.order() as f64;
    let d = 1.0 / n as f64;
    let vol_times_d = vol * d;
    let bound = 1.0 / k as f64;
    let mut violations = Vec::new();
    let verdict_frame = if !is_frame {
        Verdict::NotApplicable
    } else if n * k <= gamma.order() {
        Verdict::Pass
    } else {
        violations.push(format!("frame but n·|Γ_[g]| = {} > |Γ| = {}", n * k, gamma.order()));
        Verdict::Fail
    };
    let verdict_riesz = if !is_riesz {
        Verdict::NotApplicable
    } else if n * k >= gamma.order() {
        Verdict::Pass
    } else {
        violations.push(format!("Riesz but n·|Γ_[g]| = {} < |Γ| = {}", n * k, gamma.order()));
        Verdict::Fail
    };

    let probes = CVector::standard_basis(n);
    let s_relation_residual = check_s_relation(&full, &tiling, &probes)?;
    let parseval = parseval_norm_check(&full, &tiling, 0, Some(vol_times_d))?;
    let biorthogonality_deviation = if is_riesz {
        Some(biorthogonality_check(&reduced)?)
    } else {
        None
    };
    let sandwich = lemma_sandwich_check(frame_bounds.0, frame_bounds.1, vol, d, norm_sq(&sys.window));

    let mut check_tol = |name: &str, value: f64, tol: f64| {
        if !(value <= tol) {
            violations.push(format!("{name} = {value:e} exceeds {tol:e}"));
        }
    };
    check_tol("frame-operator relation residual", s_relation_residual, IDENTITY_TOL);
    check_tol("Parseval norm deviation", parseval.max_deviation, IDENTITY_TOL);
    if let Some(c) = parseval.calibration_deviation {
        check_tol("Parseval calibration deviation", c, IDENTITY_TOL);
    }
    if let Some(b) = biorthogonality_deviation {
        check_tol("biorthogonality deviation", b, IDENTITY_TOL);
    }
    check_tol("sandwich lower slack deficit", -sandwich.lower_slack, SANDWICH_TOL);
    check_tol("sandwich upper slack deficit", -sandwich.upper_slack, SANDWICH_TOL);
    if !violations.is_empty() {
        return Err(GaborError::TheoremViolation(violations.join("; ")));
    }
    Ok(TheoremCheck {
        n,
        subgroup_order: gamma.order(),
        stab_order: k,
        lambda_size: lambda.len(),
        lambda,
        is_frame,
        is_riesz,
        frame_bounds,
        riesz_extremes,
        vol_times_d,
        bound,
        verdict_frame,
        verdict_riesz,
        s_relation_residual,
        parseval_deviation: parseval.max_deviation,
        calibration_deviation: parseval.calibration_deviation,
        biorthogonality_deviation,
        sandwich,
    })
}

/// Windows with structure: standard basis vectors, the constant vector and
/// indicators of the subgroups `dℤₙ` for proper divisors `d` of `n`.
pub fn structured_windows(n: usize) -> Vec<(String, Vec<Complex64>)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::new();
    for k in 0..n {
        let mut v = vec![zero; n];
        v[k] = one;
        out.push((format!("basis{k}"), v));
    }
    out.push(("constant".to_string(), vec![one; n]));
    for d in 2..n {
        if n.is_multiple_of(d) {
            out.push((
                format!("indicator{d}"),
                (0..n).map(|j| if j % d == 0 { one } else { zero }).collect(),
            ));
        }
    }
    out
}

/// One row of the scan report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub subgroup_order: usize,
    pub subgroup_gens: String,
    pub window_id: String,
    pub stab_order: usize,
    pub lambda_size: usize,
    pub is_frame: bool,
    pub is_riesz: bool,
    pub vol_times_d: f64,
    pub bound: f64,
    pub verdict_i: Verdict,
    pub verdict_ii: Verdict,
    pub max_identity_residual: f64,
}

/// A failed case with what is needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanViolation {
    pub n: usize,
    pub subgroup_gens: String,
    pub window_id: String,
    pub seed: u64,
    pub window: Vec<(f64, f64)>,
    pub message: String,
}

/// Totals of an exhaustive scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n_max: usize,
    pub windows_per_case: usize,
    pub seed: u64,
    pub cases: usize,
    pub frames: usize,
    pub riesz: usize,
    pub violations: usize,
    /// Largest identity residual over all passing cases.
    pub max_identity_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub violations: Vec<ScanViolation>,
    pub summary: ScanSummary,
}

impl ScanReport {
    /// Writes the rows as CSV with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), GaborError> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(CsvRow::from(row))
                .map_err(|e| GaborError::Output(e.to_string()))?;
        }
        w.flush().map_err(|e| GaborError::Output(e.to_string()))
    }
}

#[derive(Serialize)]
struct CsvRow<'a> {
    n: usize,
    subgroup_order: usize,
    subgroup_gens: &'a str,
    window_id: &'a str,
    stab_order: usize,
    lambda_size: usize,
    is_frame: bool,
    is_riesz: bool,
    vol_times_d: String,
    bound: String,
    verdict_i: &'static str,
    verdict_ii: &'static str,
    max_identity_residual: String,
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

impl<'a> From<&'a ScanRow> for CsvRow<'a> {
    fn from(r: &'a ScanRow) -> Self {
        Self {
            n: r.n,
            subgroup_order: r.subgroup_order,
            subgroup_gens: &r.subgroup_gens,
            window_id: &r.window_id,
            stab_order: r.stab_order,
            lambda_size: r.lambda_size,
            is_frame: r.is_frame,
            is_riesz: r.is_riesz,
            vol_times_d: fmt_f64(r.vol_times_d),
            bound: fmt_f64(r.bound),
            verdict_i: r.verdict_i.as_str(),
            verdict_ii: r.verdict_ii.as_str(),
            max_identity_residual: fmt_f64(r.max_identity_residual),
        }
    }
}

/// Runs [`verify_theorem`] on every subgroup of `ℤₙ²` for `2 ≤ n ≤ n_max`,
/// with `windows_per_case` seeded Gaussian windows per subgroup and the
/// [`structured_windows`]. Random windows for `(n, subgroup index)` come
/// from stream `1000·n + index` of a ChaCha generator seeded with `seed`,
/// so the report is a pure function of the arguments.
pub fn exhaustive_scan(n_max: usize, windows_per_case: usize, seed: u64) -> Result<ScanReport, GaborError> {
    check_modulus(n_max)?;
    if n_max > MAX_SCAN_MODULUS {
        return Err(GaborError::ModulusTooLarge {
            n: n_max,
            max: MAX_SCAN_MODULUS,
        });
    }
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut max_residual = 0.0_f64;
    for n in 2..=n_max {
        let structured = structured_windows(n);
        for (s_idx, subgroup) in subgroup_enumerate(n)?.into_iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((1000 * n + s_idx) as u64);
            let mut windows = structured.clone();
            for w in 0..windows_per_case {
                windows.push((format!("random{w}"), random_vector(n, &mut rng)));
            }
            let label = subgroup.generators_label();
            for (window_id, window) in windows {
                let sys = FiniteGaborSystem::new(window.clone(), subgroup.clone())?;
                match verify_theorem(&sys) {
                    Ok(check) => {
                        let residual = check.max_identity_residual();
                        max_residual = max_residual.max(residual);
                        rows.push(ScanRow {
                            n,
                            subgroup_order: subgroup.order(),
                            subgroup_gens: label.clone(),
                            window_id,
                            stab_order: check.stab_order,
                            lambda_size: check.lambda_size,
                            is_frame: check.is_frame,
                            is_riesz: check.is_riesz,
                            vol_times_d: check.vol_times_d,
                            bound: check.bound,
                            verdict_i: check.verdict_frame,
                            verdict_ii: check.verdict_riesz,
                            max_identity_residual: residual,
                        });
                    }
                    Err(GaborError::TheoremViolation(message)) => violations.push(ScanViolation {
                        n,
                        subgroup_gens: label.clone(),
                        window_id,
                        seed,
                        window: window.iter().map(|z| (z.re, z.im)).collect(),
                        message,
                    }),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    let summary = ScanSummary {
        n_max,
        windows_per_case,
        seed,
        cases: rows.len() + violations.len(),
        frames: rows.iter().filter(|r| r.is_frame).count(),
        riesz: rows.iter().filter(|r| r.is_riesz).count(),
        violations: violations.len(),
        max_identity_residual: max_residual,
    };
    Ok(ScanReport {
        rows,
        violations,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn e(n: usize, k: usize) -> Vec<Complex64> {
        CVector::basis(n, k).0
    }

    #[test]
    fn pi_shift_examples() {
        let v = vec![c(1.0), c(2.0), c(3.0)];
        assert_eq!(pi_shift(3, (0, 0), &v).unwrap(), v);
        assert_eq!(pi_shift(2, (1, 0), &e(2, 0)).unwrap(), e(2, 1));
        assert_eq!(pi_shift(2, (0, 1), &e(2, 0)).unwrap(), e(2, 0));
        assert!(matches!(
            pi_shift(2, (0, 1), &v),
            Err(GaborError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn sigma_example() {
        let s = sigma_finite(4, (1, 0), (0, 1));
        assert!((s - Complex64::from_polar(1.0, -PI / 2.0)).norm() < 1e-15);
        assert_eq!(sigma_finite(4, (0, 0), (3, 2)), c(1.0));
    }

    #[test]
    fn orthogonality_by_hand() {
        assert!((orthogonality_sum(2, &e(2, 0), &e(2, 0)).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(formal_degree_finite(5).unwrap(), 0.2);
    }

    #[test]
    fn subgroup_counts() {
        let orders: Vec<usize> = subgroup_enumerate(2).unwrap().iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
        assert_eq!(subgroup_enumerate(3).unwrap().len(), 6);
        assert!(subgroup_enumerate(13).is_err());
    }

    #[test]
    fn from_elements_rejects_non_subgroup() {
        assert!(SubgroupDescr::from_elements(3, &[(0, 0), (1, 0)]).is_err());
        assert!(SubgroupDescr::from_elements(3, &[(0, 0), (1, 0), (2, 0)]).is_ok());
    }

    #[test]
    fn stabilizer_examples() {
        let full = SubgroupDescr::full(2).unwrap();
        let sys = FiniteGaborSystem::new(e(2, 0), full.clone()).unwrap();
        let st = projective_stabilizer_finite(&sys, 1e-9).unwrap();
        assert_eq!(st.subgroup.elements, vec![(0, 0), (0, 1)]);
        assert!(st.phases.iter().all(|(_, u)| (u - 1.0).norm() < 1e-15));
        let h = 0.5f64.sqrt();
        let flat = FiniteGaborSystem::new(vec![c(h), c(h)], full).unwrap();
        let st = projective_stabilizer_finite(&flat, 1e-9).unwrap();
        assert!(st.subgroup.elements.contains(&(1, 0)));
    }

    #[test]
    fn theorem_full_group_basis_window() {
        let sys = FiniteGaborSystem::new(e(2, 0), SubgroupDescr::full(2).unwrap()).unwrap();
        let chk = verify_theorem(&sys).unwrap();
        assert!(chk.is_frame && chk.is_riesz);
        assert_eq!(chk.lambda, vec![(0, 0), (1, 0)]);
        assert_eq!((chk.verdict_frame, chk.verdict_riesz), (Verdict::Pass, Verdict::Pass));
        assert!((chk.vol_times_d - 0.5).abs() < 1e-15);
        assert!(chk.s_relation_residual <= 1e-12);
        assert!(chk.parseval_deviation <= 1e-12);
        assert!((chk.calibration_deviation.unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn theorem_modulation_subgroup() {
        let gamma = SubgroupDescr::generated(2, &[(0, 1)]).unwrap();
        let sys = FiniteGaborSystem::new(e(2, 0), gamma).unwrap();
        let chk = verify_theorem(&sys).unwrap();
        assert!(!chk.is_frame && chk.is_riesz);
        assert_eq!(chk.lambda, vec![(0, 0)]);
        assert_eq!(chk.verdict_frame, Verdict::NotApplicable);
        assert!((chk.vol_times_d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn small_scan_is_clean_and_deterministic() {
        let a = exhaustive_scan(3, 5, 11).unwrap();
        assert_eq!(a.summary.violations, 0);
        let b = exhaustive_scan(3, 5, 11).unwrap();
        let mut wa = Vec::new();
        let mut wb = Vec::new();
        a.write_csv(&mut wa).unwrap();
        b.write_csv(&mut wb).unwrap();
        assert_eq!(wa, wb);
        let header = String::from_utf8(wa).unwrap();
        assert!(header.starts_with(
            "n,subgroup_order,subgroup_gens,window_id,stab_order,lambda_size,is_frame,is_riesz,vol_times_d,bound,verdict_i,verdict_ii,max_identity_residual\n"
        ));
    }
}
