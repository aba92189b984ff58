//! Finite truncations of Fuchsian groups.
//!
//! A lattice is given by generators; its elements are enumerated into
//! Frobenius-norm balls by breadth-first search over right multiplication by
//! the generators and their inverses. For PSL(2,ℤ) the result is
//! cross-checked against direct enumeration of integer matrices.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::hyperbolic::{
    distance, GridRegion, MoebiusKey, MoebiusMap, QuadratureError, QuadratureGrid, UpperHalfPoint,
};

/// Default cap on the number of elements in a ball.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// Largest norm bound accepted by [`brute_force_integer_ball`].
pub const INTEGER_BALL_MAX_BOUND: f64 = 30.0;

/// Default hyperbolic-distance tolerance for point-stabiliser membership.
pub const DEFAULT_STABILIZER_TOL: f64 = 1e-8;

const NORM_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GroupError {
    #[error("norm bound {0} is below the norm √2 of the identity")]
    BoundBelowIdentity(f64),
    #[error("ball exceeds the element cap of {cap}")]
    TooManyElements { cap: usize },
    #[error("integer enumeration supports norm bounds up to {max}, got {bound}")]
    BoundTooLarge { bound: f64, max: f64 },
    #[error("stabiliser tolerance {0} outside (0, 1e-4]")]
    BadTolerance(f64),
    #[error("lattice {0:?} has no generators")]
    NoGenerators(String),
    #[error("lattice {0:?} has no covolume; supply one in the configuration")]
    MissingCovolume(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// A lattice `Γ ≤ PSL(2,ℝ)` described by generators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub name: String,
    pub generators: Vec<MoebiusMap>,
    /// Covolume under the normalisation of [`covolume_psl2z`] (compact factor
    /// of mass one), if known.
    pub covolume: Option<f64>,
    /// Set when the generators generate all of PSL(2,ℤ); balls are then
    /// certified against the integer enumeration.
    pub full_integer_group: bool,
}

impl LatticeSpec {
    /// PSL(2,ℤ) generated by `S` and `T`.
    pub fn psl2z() -> Self {
        Self {
            name: "psl2z".into(),
            generators: vec![MoebiusMap::s(), MoebiusMap::t()],
            covolume: None,
            full_integer_group: true,
        }
    }
}

/// Finite set of group elements with Frobenius norm at most `norm_bound`.
#[derive(Debug, Clone)]
pub struct GroupBall {
    norm_bound: f64,
    elements: Vec<MoebiusMap>,
    index: HashMap<MoebiusKey, usize>,
    closure_certified: bool,
}

impl GroupBall {
    fn from_elements(norm_bound: f64, mut elements: Vec<MoebiusMap>) -> Self {
        sort_identity_first(&mut elements);
        let index = elements.iter().enumerate().map(|(k, m)| (m.key(), k)).collect();
        Self {
            norm_bound,
            elements,
            index,
            closure_certified: false,
        }
    }

    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Elements ordered identity first, then by Frobenius norm, then
    /// lexicographically.
    pub fn elements(&self) -> &[MoebiusMap] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn closure_certified(&self) -> bool {
        self.closure_certified
    }

    pub fn position(&self, m: &MoebiusMap) -> Option<usize> {
        self.index.get(&m.key()).copied()
    }

    pub fn contains(&self, m: &MoebiusMap) -> bool {
        self.index.contains_key(&m.key())
    }

    /// Elements as a set of keys, for exact comparisons.
    pub fn key_set(&self) -> HashSet<MoebiusKey> {
        self.index.keys().copied().collect()
    }

    /// Sub-ball of elements with norm at most `norm_bound`.
    pub fn restrict(&self, norm_bound: f64) -> GroupBall {
        let kept = self
            .elements
            .iter()
            .filter(|m| within(m, norm_bound))
            .copied()
            .collect();
        let mut ball = Self::from_elements(norm_bound, kept);
        ball.closure_certified = self.closure_certified && norm_bound <= self.norm_bound;
        ball
    }
}

fn within(m: &MoebiusMap, bound: f64) -> bool {
    m.frobenius_norm_sq() <= bound * bound + NORM_SLACK
}

fn sort_identity_first(elements: &mut [MoebiusMap]) {
    elements.sort_by(|x, y| {
        let xi = x.is_identity(0.0);
        let yi = y.is_identity(0.0);
        yi.cmp(&xi).then_with(|| x.norm_lex_cmp(y))
    });
}

/// Breadth-first enumeration of the ball of radius `norm_bound`.
///
/// Elements outside the ball are pruned, so completeness relies on every
/// in-ball element being reachable through in-ball words. That holds for
/// PSL(2,ℤ) with `{S, T}` (lattice reduction of the columns never increases
/// the norm) and is certified there against [`brute_force_integer_ball`].
pub fn ball_enumerate(spec: &LatticeSpec, norm_bound: f64) -> Result<GroupBall, GroupError> {
    ball_enumerate_capped(spec, norm_bound, DEFAULT_ELEMENT_CAP)
}

pub fn ball_enumerate_capped(spec: &LatticeSpec, norm_bound: f64, cap: usize) -> Result<GroupBall, GroupError> {
    if !within(&MoebiusMap::IDENTITY, norm_bound) {
        return Err(GroupError::BoundBelowIdentity(norm_bound));
    }
    if spec.generators.is_empty() {
        return Err(GroupError::NoGenerators(spec.name.clone()));
    }
    let mut steps: Vec<MoebiusMap> = Vec::new();
    for g in &spec.generators {
        for s in [*g, g.inverse()] {
            if !steps.iter().any(|t| t.key() == s.key()) {
                steps.push(s);
            }
        }
    }

    let mut seen: HashSet<MoebiusKey> = HashSet::new();
    let mut elements = vec![MoebiusMap::IDENTITY];
    seen.insert(MoebiusMap::IDENTITY.key());
    let mut queue = VecDeque::from([MoebiusMap::IDENTITY]);
    while let Some(m) = queue.pop_front() {
        for s in &steps {
            let next = m.compose(s);
            if within(&next, norm_bound) && seen.insert(next.key()) {
                if elements.len() == cap {
                    return Err(GroupError::TooManyElements { cap });
                }
                elements.push(next);
                queue.push_back(next);
            }
        }
    }

    let mut ball = GroupBall::from_elements(norm_bound, elements);
    if spec.full_integer_group && norm_bound <= INTEGER_BALL_MAX_BOUND {
        let oracle = brute_force_integer_ball(norm_bound)?;
        ball.closure_certified = oracle.key_set() == ball.key_set();
    }
    Ok(ball)
}

/// Every integer unit-determinant matrix with Frobenius norm at most
/// `norm_bound`, up to sign.
pub fn brute_force_integer_ball(norm_bound: f64) -> Result<GroupBall, GroupError> {
    if !(norm_bound <= INTEGER_BALL_MAX_BOUND) {
        return Err(GroupError::BoundTooLarge {
            bound: norm_bound,
            max: INTEGER_BALL_MAX_BOUND,
        });
    }
    if !within(&MoebiusMap::IDENTITY, norm_bound) {
        return Err(GroupError::BoundBelowIdentity(norm_bound));
    }
    let r = norm_bound.floor() as i64;
    let bound_sq = norm_bound * norm_bound + NORM_SLACK;
    let mut seen = HashSet::new();
    let mut elements = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let partial = (a * a + b * b + c * c) as f64;
                if partial > bound_sq {
                    continue;
                }
                let candidates: Vec<i64> = if a != 0 {
                    if (1 + b * c) % a == 0 {
                        vec![(1 + b * c) / a]
                    } else {
                        vec![]
                    }
                } else if b * c == -1 {
                    (-r..=r).collect()
                } else {
                    vec![]
                };
                for d in candidates {
                    if partial + (d * d) as f64 > bound_sq {
                        continue;
                    }
                    debug_assert_eq!(a * d - b * c, 1);
                    let m = MoebiusMap::new(a as f64, b as f64, c as f64, d as f64)
                        .expect("integer matrix with determinant one");
                    if seen.insert(m.key()) {
                        elements.push(m);
                    }
                }
            }
        }
    }
    let mut ball = GroupBall::from_elements(norm_bound, elements);
    ball.closure_certified = true;
    Ok(ball)
}

/// Point stabiliser within a ball.
#[derive(Debug, Clone)]
pub struct PointStabilizer {
    pub elements: Vec<MoebiusMap>,
    /// False when some product or inverse of stabiliser elements falls
    /// outside the ball; the ball is then too small to contain the whole
    /// stabiliser reliably.
    pub closed_in_ball: bool,
}

impl PointStabilizer {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// All `γ` in the ball with `d(γ·z, z) ≤ tol`.
pub fn stabilizer_of_point(ball: &GroupBall, z: UpperHalfPoint, tol: f64) -> Result<PointStabilizer, GroupError> {
    if !(tol > 0.0 && tol <= 1e-4) {
        return Err(GroupError::BadTolerance(tol));
    }
    let elements: Vec<MoebiusMap> = ball
        .elements()
        .iter()
        .filter(|g| distance(g.act(z), z) <= tol)
        .copied()
        .collect();
    let keys: HashSet<MoebiusKey> = elements.iter().map(MoebiusMap::key).collect();
    let closed_in_ball = elements
        .iter()
        .all(|x| keys.contains(&x.inverse().key()) && elements.iter().all(|y| keys.contains(&x.compose(y).key())));
    Ok(PointStabilizer {
        elements,
        closed_in_ball,
    })
}

/// Factorisation `γ = λ·γ′` of ball elements over a finite stabiliser.
#[derive(Debug, Clone)]
pub struct CosetSystem {
    pub stabilizer: Vec<MoebiusMap>,
    pub representatives: Vec<MoebiusMap>,
    /// For each ball element (by ball index): `(representative index,
    /// stabiliser index)`.
    pub assignment: Vec<(usize, usize)>,
    /// For each representative: ball indices of `λ·γ′` in stabiliser order,
    /// `None` where the product leaves the ball.
    pub coset_members: Vec<Vec<Option<usize>>>,
}

impl CosetSystem {
    /// Representatives whose whole coset lies in the ball.
    pub fn complete_representatives(&self) -> Vec<usize> {
        (0..self.representatives.len())
            .filter(|&r| self.coset_members[r].iter().all(Option::is_some))
            .collect()
    }

    /// Ball indices of all members of complete cosets together with their
    /// factorisation, in representative-major order.
    pub fn tiled_elements(&self) -> Vec<(usize, usize, usize)> {
        self.complete_representatives()
            .into_iter()
            .flat_map(|r| {
                self.coset_members[r]
                    .iter()
                    .enumerate()
                    .map(move |(s, m)| (m.expect("complete coset"), r, s))
            })
            .collect()
    }
}

/// Picks, for every coset `γ·Γ_z` met by the ball, the member of minimal
/// Frobenius norm (ties broken lexicographically) as representative; the
/// identity always represents the trivial coset.
pub fn coset_representatives(ball: &GroupBall, stabilizer: &[MoebiusMap]) -> CosetSystem {
    let mut stab: Vec<MoebiusMap> = stabilizer.to_vec();
    sort_identity_first(&mut stab);
    if stab.first().is_none_or(|s| !s.is_identity(0.0)) {
        stab.insert(0, MoebiusMap::IDENTITY);
    }
    let n = ball.len();
    let mut assignment: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut representatives = Vec::new();
    let mut coset_members = Vec::new();
    // Ball elements are already ordered identity first, then by norm and
    // lexicographically, so the first unassigned element of each coset is
    // its representative.
    for (k, lambda) in ball.elements().iter().enumerate() {
        if assignment[k].is_some() {
            continue;
        }
        let r = representatives.len();
        representatives.push(*lambda);
        let members: Vec<Option<usize>> = stab.iter().map(|s| ball.position(&lambda.compose(s))).collect();
        for (s, m) in members.iter().enumerate() {
            if let Some(idx) = *m {
                if assignment[idx].is_none() {
                    assignment[idx] = Some((r, s));
                }
            }
        }
        coset_members.push(members);
    }
    CosetSystem {
        stabilizer: stab,
        representatives,
        assignment: assignment
            .into_iter()
            .map(|a| a.expect("every element assigned"))
            .collect(),
        coset_members,
    }
}

/// Quadrature value with a discretisation error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error_estimate: f64,
}

/// Default grid for the PSL(2,ℤ) fundamental domain.
pub fn default_covolume_grid() -> QuadratureGrid {
    QuadratureGrid::new(GridRegion::modular_domain(20.0), (400, 2000)).expect("valid default grid")
}

/// Covolume of PSL(2,ℤ) by quadrature over `{|x| ≤ 1/2, |z| ≥ 1}` with
/// density `y⁻²`, multiplied by `haar_scale`. The compact factor of the Haar
/// measure carries mass one, so the exact value at scale one is `π/3`.
///
/// The error estimate is the Richardson difference against the same region
/// at half resolution plus the mass `e^{-t_max}` cut off above the grid.
pub fn covolume_psl2z(grid: &QuadratureGrid, haar_scale: f64) -> Result<Estimate, GroupError> {
    let fine = grid.integrate(|_| 1.0)?;
    let coarse = grid.coarsened()?.integrate(|_| 1.0)?;
    let tail = match grid.region() {
        GridRegion::Columns { t_max, .. } => (-t_max).exp(),
        _ => 0.0,
    };
    Ok(Estimate {
        value: haar_scale * fine,
        error_estimate: haar_scale * ((fine - coarse).abs() / 3.0 + tail),
    })
}

/// Covolume for a lattice: computed for PSL(2,ℤ), taken from
/// [`LatticeSpec::covolume`] otherwise.
pub fn lattice_covolume(spec: &LatticeSpec, haar_scale: f64) -> Result<Estimate, GroupError> {
    match spec.covolume {
        Some(v) => Ok(Estimate {
            value: haar_scale * v,
            error_estimate: 0.0,
        }),
        None if spec.name == "psl2z" => covolume_psl2z(&default_covolume_grid(), haar_scale),
        None => Err(GroupError::MissingCovolume(spec.name.clone())),
    }
}
