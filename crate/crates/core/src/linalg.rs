//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Everything here works at dimension ≤ ~16: states, projectors and their
//! spectral functions. The eigensolver is a cyclic complex Jacobi iteration,
//! which is slow asymptotically but robust on the tiny, frequently
//! rank-deficient matrices that show up in entropy evaluations.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Maximum entrywise asymmetry tolerated by [`ComplexMatrix::is_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues at or below this are treated as exact zeros by spectral functions.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Most negative eigenvalue accepted by [`spectral_log2`].
pub const NEGATIVE_EIGENVALUE_FLOOR: f64 = 1e-10;

const JACOBI_OFF_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "matrix dimension must be positive".into(),
            ));
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        if let Some(pos) = data
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidInput(format!(
                "non-finite entry at ({}, {})",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} in a matrix with {dim} rows",
                bad.len()
            )));
        }
        Self::from_vec(dim, rows.concat())
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The outer product `v v†`.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Real part of `tr(self · other)`, without forming the product.
    pub fn trace_product_re(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product_re: dimension mismatch");
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                acc += (self[(i, k)] * other[(k, i)]).re;
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] − conj(M[j][i])|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= HERMITIAN_TOL
    }

    fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    fn off_diagonal_sq(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    acc += self[(i, j)].norm_sqr();
                }
            }
        }
        acc
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product: dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix sum: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix difference: dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Hermitian inner product `⟨a|b⟩`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<Vec<Complex64>>,
}

impl Spectrum {
    /// `Σ f(λ_i) v_i v_i†`, skipping terms where `f` returns `None`.
    pub fn apply(&self, f: impl Fn(f64) -> Option<f64>) -> ComplexMatrix {
        let dim = self.eigenvectors.first().map_or(0, Vec::len);
        let mut out = ComplexMatrix::zeros(dim);
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let Some(w) = f(*lambda) else { continue };
            for i in 0..dim {
                let vi = v[i] * w;
                for j in 0..dim {
                    out[(i, j)] += vi * v[j].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(Some)
    }

    /// Projector onto the span of eigenvectors with eigenvalue above [`SUPPORT_CUTOFF`].
    pub fn support_projector(&self) -> ComplexMatrix {
        self.apply(|l| (l > SUPPORT_CUTOFF).then_some(1.0))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Spectrum> {
    let asymmetry = m.hermiticity_residual();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let n = m.dim();
    // work on the exactly Hermitian part
    let mut a = ComplexMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let threshold = JACOBI_OFF_TOL * JACOBI_OFF_TOL * a.frobenius_sq().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if a.off_diagonal_sq() <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = order
        .iter()
        .map(|&col| (0..n).map(|row| v[(row, col)]).collect())
        .collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi step annihilating `a[p][q]`; accumulates the rotation into `v`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // phase that makes the pivot real, then a real symmetric rotation
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, e^{-iφ}) on (p, q) followed by [[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Kronecker product; basis order has the first factor's index most significant.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let n = da * db;
    let mut out = ComplexMatrix::zeros(n);
    for ia in 0..da {
        for ja in 0..da {
            let x = a[(ia, ja)];
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..db {
                for jb in 0..db {
                    out[(ia * db + ib, ja * db + jb)] = x * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Traces out every subsystem except `keep` (bipartite only).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    let [da, db] = *dims else {
        return Err(Error::InvalidInput(format!(
            "partial trace supports exactly two subsystems, got {}",
            dims.len()
        )));
    };
    if da * db != m.dim() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dimensions {da}x{db} do not multiply to matrix dimension {}",
            m.dim()
        )));
    }
    match keep {
        0 => {
            let mut out = ComplexMatrix::zeros(da);
            for i in 0..da {
                for j in 0..da {
                    out[(i, j)] = (0..db).map(|b| m[(i * db + b, j * db + b)]).sum();
                }
            }
            Ok(out)
        }
        1 => {
            let mut out = ComplexMatrix::zeros(db);
            for i in 0..db {
                for j in 0..db {
                    out[(i, j)] = (0..da).map(|a| m[(a * db + i, a * db + j)]).sum();
                }
            }
            Ok(out)
        }
        _ => Err(Error::InvalidInput(format!(
            "subsystem index {keep} out of range for a bipartite system"
        ))),
    }
}

/// Base-2 matrix logarithm restricted to the support.
///
/// Eigenvalues at or below [`SUPPORT_CUTOFF`] contribute nothing, so the
/// result is `log₂` on the support and zero on the kernel.
pub fn spectral_log2(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let spectrum = eig_hermitian(m)?;
    log2_of_spectrum(&spectrum)
}

pub(crate) fn log2_of_spectrum(spectrum: &Spectrum) -> Result<ComplexMatrix> {
    let min = spectrum.min_eigenvalue();
    if min < -NEGATIVE_EIGENVALUE_FLOOR {
        return Err(Error::NegativeEigenvalue {
            eigenvalue: min,
            floor: NEGATIVE_EIGENVALUE_FLOOR,
        });
    }
    Ok(spectrum.apply(|l| (l > SUPPORT_CUTOFF).then(|| l.log2())))
}
