//! PSL(2,ℝ) acting on the upper half-plane.
//!
//! Group elements are stored as unit-determinant real matrices in a canonical
//! sign (first entry of `(a, b, c, d)` that is not numerically zero is
//! positive), so every class of PSL(2,ℝ) has exactly one representative and
//! the automorphy factor `j(m, z) = (cz + d)^{-1}` is a well-defined function
//! of the class.

mod quadrature;

pub use quadrature::{Floor, GridRegion, QuadratureError, QuadratureGrid};

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Entries with modulus at or below this count as zero for the sign rule.
pub const SIGN_ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("point must lie in the upper half-plane, got imaginary part {0}")]
    NotInUpperHalfPlane(f64),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("determinant {0} is not 1 (after tolerance)")]
    BadDeterminant(f64),
    #[error("cannot parse point {0:?}")]
    Parse(String),
}

/// A point `x + iy` with `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    x: f64,
    y: f64,
}

impl UpperHalfPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if !x.is_finite() || !y.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if y <= 0.0 {
            return Err(GeometryError::NotInUpperHalfPlane(y));
        }
        Ok(Self { x, y })
    }

    /// The base point `i`.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    /// `e^{iπ/3}`, the order-three elliptic point of PSL(2,ℤ).
    pub fn rho() -> Self {
        Self {
            x: 0.5,
            y: 3f64.sqrt() / 2.0,
        }
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeometryError> {
        Self::new(z.re, z.im)
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Parses `i`, `2i`, `0.5+0.866i`, `1-0.5i`... as well as `x,y`.
    pub fn parse(s: &str) -> Result<Self, GeometryError> {
        let err = || GeometryError::Parse(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some((a, b)) = t.split_once(',') {
            let x = a.parse::<f64>().map_err(|_| err())?;
            let y = b.parse::<f64>().map_err(|_| err())?;
            return Self::new(x, y);
        }
        let body = t.strip_suffix('i').ok_or_else(err)?;
        // Split at the last sign that is not an exponent sign or leading.
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                split = Some(k);
                break;
            }
        }
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let parse_im = |s: &str| -> Result<f64, GeometryError> {
            match s {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => s.parse::<f64>().map_err(|_| err()),
            }
        };
        let x = re.parse::<f64>().map_err(|_| err())?;
        Self::new(x, parse_im(im)?)
    }
}

impl fmt::Display for UpperHalfPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// An element of PSL(2,ℝ) in canonical form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusMap {
    pub const IDENTITY: MoebiusMap = MoebiusMap {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Accepts any real matrix whose determinant is within `1e-9` of one;
    /// the result is renormalised to determinant one and sign-canonicalised.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeometryError> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let det = a * d - b * c;
        if (det - 1.0).abs() > 1e-9 {
            return Err(GeometryError::BadDeterminant(det));
        }
        Ok(Self::normalised(a, b, c, d))
    }

    /// Rotation by angle `2θ` about `i`: `(cos θ, sin θ; -sin θ, cos θ)`.
    pub fn rotation(theta: f64) -> Self {
        Self::normalised(theta.cos(), theta.sin(), -theta.sin(), theta.cos())
    }

    /// The affine element `w ↦ y·w + x`, which sends `i` to `x + iy`.
    pub fn affine_to(z: UpperHalfPoint) -> Self {
        let s = z.y.sqrt();
        Self::normalised(s, z.x / s, 0.0, 1.0 / s)
    }

    /// `S = (0, -1; 1, 0)`, i.e. `z ↦ -1/z`.
    pub fn s() -> Self {
        Self::normalised(0.0, -1.0, 1.0, 0.0)
    }

    /// `T = (1, 1; 0, 1)`, i.e. `z ↦ z + 1`.
    pub fn t() -> Self {
        Self::normalised(1.0, 1.0, 0.0, 1.0)
    }

    fn normalised(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        let (a, b, c, d) = if det == 1.0 {
            (a, b, c, d)
        } else {
            let s = det.sqrt();
            (a / s, b / s, c / s, d / s)
        };
        let lead = [a, b, c, d]
            .into_iter()
            .find(|v| v.abs() > SIGN_ZERO_TOL)
            .unwrap_or(1.0);
        // Adding 0.0 turns -0.0 into 0.0 so equal classes print identically.
        let s = if lead < 0.0 { -1.0 } else { 1.0 };
        Self {
            a: s * a + 0.0,
            b: s * b + 0.0,
            c: s * c + 0.0,
            d: s * d + 0.0,
        }
    }

    #[inline]
    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.entries()
            .iter()
            .zip(Self::IDENTITY.entries())
            .all(|(x, y)| (x - y).abs() <= tol)
    }

    /// `m · z = (az + b)/(cz + d)`.
    pub fn act(&self, z: UpperHalfPoint) -> UpperHalfPoint {
        let den = Complex64::new(self.c * z.x + self.d, self.c * z.y);
        let den_sq = den.norm_sqr();
        let re = ((self.a * z.x + self.b) * (self.c * z.x + self.d) + self.a * self.c * z.y * z.y) / den_sq;
        let im = z.y / den_sq;
        debug_assert!(im > 0.0);
        UpperHalfPoint { x: re, y: im }
    }

    /// Matrix product `self · other`, canonicalised.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        Self::normalised(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )
    }

    /// Adjugate, canonicalised.
    pub fn inverse(&self) -> MoebiusMap {
        Self::normalised(self.d, -self.b, -self.c, self.a)
    }

    /// `j(m, z) = (cz + d)^{-1}`.
    pub fn j_factor(&self, z: UpperHalfPoint) -> Complex64 {
        Complex64::new(self.c * z.x + self.d, self.c * z.y).inv()
    }

    /// Order used for deterministic selection: Frobenius norm, then
    /// lexicographic on `(a, b, c, d)`.
    pub fn norm_lex_cmp(&self, other: &MoebiusMap) -> Ordering {
        self.frobenius_norm_sq()
            .total_cmp(&other.frobenius_norm_sq())
            .then_with(|| self.lex_cmp(other))
    }

    pub fn lex_cmp(&self, other: &MoebiusMap) -> Ordering {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| x.total_cmp(&y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Hashable key: entries rounded to a `1e-9` grid. Exact for integer
    /// matrices.
    pub fn key(&self) -> MoebiusKey {
        let q = |v: f64| (v * 1e9).round() as i64;
        MoebiusKey([q(self.a), q(self.b), q(self.c), q(self.d)])
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Quantised canonical representative used for deduplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MoebiusKey([i64; 4]);

/// Hyperbolic distance `acosh(1 + |z - w|² / (2 y_z y_w))`, evaluated as
/// `2 asinh(|z - w| / (2 √(y_z y_w)))` to stay accurate near zero.
pub fn distance(z: UpperHalfPoint, w: UpperHalfPoint) -> f64 {
    let chord = ((z.x - w.x).powi(2) + (z.y - w.y).powi(2)).sqrt();
    2.0 * (chord / (2.0 * (z.y * w.y).sqrt())).asinh()
}

/// Point at hyperbolic distance `r` from `centre` in direction `phi`
/// (`phi` in `[0, 2π)`, measured as the rotation angle about the centre).
pub fn geodesic_polar_point(centre: UpperHalfPoint, r: f64, phi: f64) -> UpperHalfPoint {
    let radial = UpperHalfPoint { x: 0.0, y: r.exp() };
    let around_i = MoebiusMap::rotation(phi / 2.0).act(radial);
    MoebiusMap::affine_to(centre).act(around_i)
}

/// Integral of `f` against `y⁻² dx dy` over the grid's region.
pub fn integrate_invariant(
    grid: &QuadratureGrid,
    f: impl FnMut(UpperHalfPoint) -> f64,
) -> Result<f64, QuadratureError> {
    grid.integrate(f)
}

/// Hyperbolic area of the disc of radius `r`: `2π(cosh r - 1)`.
pub fn disc_area(r: f64) -> f64 {
    2.0 * PI * (r.cosh() - 1.0)
}
