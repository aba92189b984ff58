//! Dense complex Hermitian linear algebra.
//!
//! Everything downstream (Gram matrices, frame operators, their inverse
//! square roots) reduces to the spectral decomposition of a small-to-medium
//! Hermitian matrix. The eigensolver is a cyclic complex Jacobi scheme: each
//! pivot is first rotated to a real off-diagonal entry with a diagonal phase
//! and then annihilated with an ordinary real plane rotation. Sweeps run in a
//! fixed row-major pivot order, so identical input gives bit-identical output.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

/// Default relative threshold for rank and kernel decisions.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left}x{left} against {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: deviation {deviation:e} exceeds {allowed:e}")]
    NotHermitian { deviation: f64, allowed: f64 },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{threshold:e}")]
    NotPsd { eigenvalue: f64, threshold: f64 },
    #[error("probe matrix is numerically singular in every direction")]
    DegenerateProbe,
    #[error("relative tolerance {0} outside (0, 1)")]
    BadTolerance(f64),
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexDenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexDenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexDenseMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexDenseMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexDenseMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl ComplexDenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries. Returns `None` when the entry
    /// count does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(n_rows, n_cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n_cols, "ragged rows");
            for (c, &v) in row.iter().enumerate() {
                m[(r, c)] = Complex64::new(v, 0.0);
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows, cols);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged columns");
            for (r, &v) in col.iter().enumerate() {
                m[(r, c)] = v;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row_out = &mut out.data[r * other.cols..(r + 1) * other.cols];
                let row_b = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in row_out.iter_mut().zip(row_b) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise deviation from Hermitian symmetry.
    pub fn hermitian_deviation(&self) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Self {
        let mut out = self.clone();
        for r in 0..self.rows {
            out[(r, r)] = Complex64::new(self[(r, r)].re, 0.0);
            for c in (r + 1)..self.cols {
                let avg = (self[(r, c)] + self[(c, r)].conj()) * 0.5;
                out[(r, c)] = avg;
                out[(c, r)] = avg.conj();
            }
        }
        out
    }

    fn check_finite(&self) -> Result<(), LinalgError> {
        match self.data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            Some(i) => Err(LinalgError::NonFinite {
                row: i / self.cols,
                col: i % self.cols,
            }),
            None => Ok(()),
        }
    }
}

/// Ascending eigenvalues with an optional unitary matrix of eigenvectors
/// (column `k` belongs to `eigenvalues[k]`).
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<ComplexDenseMatrix>,
}

impl HermitianSpectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Full spectral decomposition of a Hermitian matrix.
///
/// The input is symmetrised as `(M + M*) / 2` after checking that it is
/// Hermitian to within `1e-8 * ‖M‖_F`.
pub fn hermitian_eigen(m: &ComplexDenseMatrix) -> Result<HermitianSpectrum, LinalgError> {
    jacobi(m, true)
}

/// Eigenvalues only; same algorithm and ordering as [`hermitian_eigen`].
pub fn hermitian_eigenvalues(m: &ComplexDenseMatrix) -> Result<Vec<f64>, LinalgError> {
    jacobi(m, false).map(|s| s.eigenvalues)
}

fn jacobi(m: &ComplexDenseMatrix, want_vectors: bool) -> Result<HermitianSpectrum, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    m.check_finite()?;
    let n = m.rows;
    let norm = m.frobenius_norm();
    let deviation = m.hermitian_deviation();
    let allowed = 1e-8 * norm;
    if deviation > allowed {
        return Err(LinalgError::NotHermitian { deviation, allowed });
    }

    let mut a = m.hermitian_part();
    let mut v = want_vectors.then(|| ComplexDenseMatrix::identity(n));

    if n > 1 && norm > 0.0 {
        let target = f64::EPSILON * norm;
        let mut sweeps = 0;
        loop {
            let off = off_diagonal_norm(&a);
            if off <= target {
                break;
            }
            if sweeps == MAX_SWEEPS {
                return Err(LinalgError::NoConvergence { sweeps, off_norm: off });
            }
            sweeps += 1;
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut a, v.as_mut(), p, q, norm);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = v.map(|v| {
        let mut sorted = ComplexDenseMatrix::zeros(n, n);
        for (new_c, &old_c) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, new_c)] = v[(r, old_c)];
            }
        }
        sorted
    });
    Ok(HermitianSpectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexDenseMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[(r, c)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One Jacobi step on pivot `(p, q)`: `A <- U* A U`, `V <- V U` with
/// `U = diag-phase(q) * R(p, q)`.
fn rotate(a: &mut ComplexDenseMatrix, v: Option<&mut ComplexDenseMatrix>, p: usize, q: usize, norm: f64) {
    let n = a.rows;
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= 1e-300 || r <= f64::EPSILON * 1e-3 * norm {
        return;
    }
    // Phase so that the (p, q) entry becomes the real number r.
    let phase = apq.conj() / r;
    let phase_conj = phase.conj();
    for k in 0..n {
        a[(k, q)] *= phase;
    }
    for k in 0..n {
        a[(q, k)] *= phase_conj;
    }

    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * c - akq * s;
        a[(k, q)] = akp * s + akq * c;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * c - aqk * s;
        a[(q, k)] = apk * s + aqk * c;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * r, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * r, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            v[(k, q)] *= phase;
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * c - vkq * s;
            v[(k, q)] = vkp * s + vkq * c;
        }
    }
}

fn check_rel_tol(rel_tol: f64) -> Result<(), LinalgError> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(())
    } else {
        Err(LinalgError::BadTolerance(rel_tol))
    }
}

/// Eigenpairs with eigenvalue above `rel_tol * λ_max`, after rejecting
/// eigenvalues below `-rel_tol * λ_max`.
fn retained_psd_spectrum(
    m: &ComplexDenseMatrix,
    rel_tol: f64,
) -> Result<(Vec<f64>, ComplexDenseMatrix, Vec<usize>), LinalgError> {
    check_rel_tol(rel_tol)?;
    let spec = hermitian_eigen(m)?;
    let lambda_max = spec.max().max(0.0);
    let threshold = rel_tol * lambda_max;
    if spec.min() < -threshold && spec.min() < 0.0 {
        return Err(LinalgError::NotPsd {
            eigenvalue: spec.min(),
            threshold,
        });
    }
    let kept: Vec<usize> = if lambda_max > 0.0 {
        (0..spec.eigenvalues.len())
            .filter(|&k| spec.eigenvalues[k] > threshold)
            .collect()
    } else {
        Vec::new()
    };
    let vectors = spec.eigenvectors.expect("requested eigenvectors");
    Ok((spec.eigenvalues, vectors, kept))
}

/// Pseudo-inverse square root of a PSD matrix: eigenvalues at or below
/// `rel_tol * λ_max` are treated as kernel directions and mapped to zero.
pub fn inverse_sqrt_psd(m: &ComplexDenseMatrix, rel_tol: f64) -> Result<ComplexDenseMatrix, LinalgError> {
    spectral_function(m, rel_tol, |l| 1.0 / l.sqrt())
}

/// Moore–Penrose pseudo-inverse of a PSD matrix with the same kernel
/// convention as [`inverse_sqrt_psd`].
pub fn pseudo_inverse_psd(m: &ComplexDenseMatrix, rel_tol: f64) -> Result<ComplexDenseMatrix, LinalgError> {
    spectral_function(m, rel_tol, |l| 1.0 / l)
}

fn spectral_function(
    m: &ComplexDenseMatrix,
    rel_tol: f64,
    f: impl Fn(f64) -> f64,
) -> Result<ComplexDenseMatrix, LinalgError> {
    let (values, vectors, kept) = retained_psd_spectrum(m, rel_tol)?;
    let n = m.rows;
    let mut out = ComplexDenseMatrix::zeros(n, n);
    for &k in &kept {
        let w = f(values[k]);
        for r in 0..n {
            let vr = vectors[(r, k)] * w;
            for c in 0..n {
                out[(r, c)] += vr * vectors[(c, k)].conj();
            }
        }
    }
    Ok(out)
}

/// Number of eigenvalues above `rel_tol * λ_max`; zero for the zero matrix.
pub fn numerical_rank(m: &ComplexDenseMatrix, rel_tol: f64) -> Result<usize, LinalgError> {
    check_rel_tol(rel_tol)?;
    let values = hermitian_eigenvalues(m)?;
    Ok(rank_of_spectrum(&values, rel_tol))
}

pub(crate) fn rank_of_spectrum(values: &[f64], rel_tol: f64) -> usize {
    let lambda_max = values.last().copied().unwrap_or(0.0);
    if lambda_max <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&l| l > rel_tol * lambda_max).count()
}

/// Extremes of `x* N x / x* D x` over the numerically nondegenerate subspace
/// of `D`.
///
/// `D` is whitened on its retained eigenspace `W = V_r Λ_r^{-1/2}` and the
/// compressed pencil `W* N W` is diagonalised. Kernel directions of `D` do
/// not enter either extreme.
pub fn generalized_rayleigh_extremes(
    n: &ComplexDenseMatrix,
    d: &ComplexDenseMatrix,
    rel_tol: f64,
) -> Result<(f64, f64), LinalgError> {
    if !n.is_square() {
        return Err(LinalgError::NotSquare {
            rows: n.rows,
            cols: n.cols,
        });
    }
    if n.rows != d.rows || !d.is_square() {
        return Err(LinalgError::DimensionMismatch {
            left: n.rows,
            right: d.rows,
        });
    }
    let (values, vectors, kept) = retained_psd_spectrum(d, rel_tol)?;
    if kept.is_empty() {
        return Err(LinalgError::DegenerateProbe);
    }
    let dim = d.rows;
    let mut whiten = ComplexDenseMatrix::zeros(dim, kept.len());
    for (j, &k) in kept.iter().enumerate() {
        let w = 1.0 / values[k].sqrt();
        for r in 0..dim {
            whiten[(r, j)] = vectors[(r, k)] * w;
        }
    }
    let compressed = whiten.adjoint().matmul(&n.hermitian_part()).matmul(&whiten);
    let spec = hermitian_eigenvalues(&compressed.hermitian_part())?;
    Ok((spec[0], spec[spec.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_spectrum() {
        let s = hermitian_eigen(&ComplexDenseMatrix::identity(3)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn two_by_two_symmetric() {
        let m = ComplexDenseMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let s = hermitian_eigenvalues(&m).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-14);
        assert!((s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_sorted() {
        let s = hermitian_eigenvalues(&ComplexDenseMatrix::from_diagonal(&[5.0, -1.0, 0.0])).unwrap();
        assert_eq!(s, vec![-1.0, 0.0, 5.0]);
    }

    #[test]
    fn complex_hermitian_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let m = ComplexDenseMatrix::from_row_major(2, 2, vec![c(1., 0.), c(0., 1.), c(0., -1.), c(1., 0.)]).unwrap();
        let s = hermitian_eigen(&m).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-14);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let m = ComplexDenseMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::NotSquare { .. })));
        let m = ComplexDenseMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(LinalgError::NotHermitian { .. })));
    }

    #[test]
    fn rejects_nan() {
        let mut m = ComplexDenseMatrix::identity(2);
        m[(1, 1)] = c(f64::NAN, 0.0);
        assert!(matches!(
            hermitian_eigen(&m),
            Err(LinalgError::NonFinite { row: 1, col: 1 })
        ));
    }

    #[test]
    fn inverse_sqrt_diagonal() {
        let r = inverse_sqrt_psd(&ComplexDenseMatrix::from_diagonal(&[4.0, 9.0]), DEFAULT_REL_TOL).unwrap();
        assert!((r[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((r[(1, 1)].re - 1.0 / 3.0).abs() < 1e-15);
        assert!(r[(0, 1)].norm() < 1e-15);
        let id = inverse_sqrt_psd(&ComplexDenseMatrix::identity(3), DEFAULT_REL_TOL).unwrap();
        assert!(id.sub(&ComplexDenseMatrix::identity(3)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn inverse_sqrt_rank_one() {
        // All-ones 2x2 has eigenvalues 0 and 2; R M R is the projector onto (1,1)/√2.
        let m = ComplexDenseMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let r = inverse_sqrt_psd(&m, DEFAULT_REL_TOL).unwrap();
        let p = r.matmul(&m).matmul(&r);
        let expected = ComplexDenseMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(p.sub(&expected).frobenius_norm() < 1e-14);
    }

    #[test]
    fn inverse_sqrt_rejects_indefinite() {
        let m = ComplexDenseMatrix::from_diagonal(&[1.0, -0.5]);
        assert!(matches!(
            inverse_sqrt_psd(&m, DEFAULT_REL_TOL),
            Err(LinalgError::NotPsd { .. })
        ));
        assert!(matches!(inverse_sqrt_psd(&m, 0.0), Err(LinalgError::BadTolerance(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            numerical_rank(&ComplexDenseMatrix::identity(4), DEFAULT_REL_TOL).unwrap(),
            4
        );
        let ones = ComplexDenseMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert_eq!(numerical_rank(&ones, DEFAULT_REL_TOL).unwrap(), 1);
        assert_eq!(
            numerical_rank(&ComplexDenseMatrix::zeros(3, 3), DEFAULT_REL_TOL).unwrap(),
            0
        );
        // Gram of {e1, e2, e1 + e2}.
        let g = ComplexDenseMatrix::from_real_rows(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0], &[1.0, 1.0, 2.0]]);
        assert_eq!(numerical_rank(&g, DEFAULT_REL_TOL).unwrap(), 2);
    }

    #[test]
    fn rayleigh_examples() {
        let id = ComplexDenseMatrix::identity(2);
        assert_eq!(
            generalized_rayleigh_extremes(&id, &id, DEFAULT_REL_TOL).unwrap(),
            (1.0, 1.0)
        );
        let n = ComplexDenseMatrix::from_diagonal(&[2.0, 8.0]);
        let (lo, hi) = generalized_rayleigh_extremes(&n, &id, DEFAULT_REL_TOL).unwrap();
        assert!((lo - 2.0).abs() < 1e-14 && (hi - 8.0).abs() < 1e-14);
        let n = ComplexDenseMatrix::from_diagonal(&[1.0, 4.0]);
        let d = ComplexDenseMatrix::from_diagonal(&[1.0, 2.0]);
        let (lo, hi) = generalized_rayleigh_extremes(&n, &d, DEFAULT_REL_TOL).unwrap();
        assert!((lo - 1.0).abs() < 1e-14 && (hi - 2.0).abs() < 1e-14);
    }

    #[test]
    fn rayleigh_degenerate_probe() {
        let z = ComplexDenseMatrix::zeros(2, 2);
        assert_eq!(
            generalized_rayleigh_extremes(&ComplexDenseMatrix::identity(2), &z, DEFAULT_REL_TOL),
            Err(LinalgError::DegenerateProbe)
        );
    }
}
