//! Self-contained dense complex linear algebra: LU with partial pivoting,
//! Hessenberg + shifted-QR eigenvalues, scaling-and-squaring matrix
//! exponentials, and Gram-weighted resolvent/operator norms.
//!
//! Everything is dense and double precision; the toolkit targets desk-scale
//! dimensions (a few hundred, at most 2000), where dense kernels are simpler
//! and bit-reproducible.

mod eig;
mod expm;
mod lu;
mod weighted;

pub use eig::eigenvalues;
pub use expm::matrix_exponential;
pub use lu::{lu_factor, lu_solve, LuFactors};
pub use weighted::{
    numerical_abscissa, weighted_operator_norm, weighted_resolvent_norm, IterationConfig,
};

use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

pub const MAX_EIG_DIM: usize = 2000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("singular matrix: zero pivot at index {pivot}")]
    Singular { pivot: usize },
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("matrix is not positive definite (failure at pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },
    #[error("QR eigenvalue iteration did not converge within {iterations} iterations")]
    EigNonConvergence {
        iterations: usize,
        partial: Vec<Complex64>,
    },
    #[error(
        "iteration stalled after {iterations} steps (estimate {estimate:.6e}, residual {residual:.3e})"
    )]
    NonConvergence {
        iterations: usize,
        estimate: f64,
        residual: f64,
    },
    #[error("matrix exponential out of range: ||tA||_1 = {norm:.3e}")]
    ExpOverflow { norm: f64 },
    #[error("dimension {dim} exceeds the dense-kernel limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Dense complex matrix in row-major layout.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        ComplexMatrix {
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

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let entries: Vec<Complex64> = diag.iter().map(|&d| Complex64::new(d, 0.0)).collect();
        Self::from_diag(&entries)
    }

    /// Build from nested rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| {
            assert_eq!(rows[i].len(), c, "ragged rows");
            rows[i][j]
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "matvec shape mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (a, b) in row.iter().zip(x.iter()) {
                acc += a * b;
            }
            out[i] = acc;
        }
        out
    }

    /// y = A^H x without forming the adjoint.
    pub fn adjoint_mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, x.len(), "adjoint matvec shape mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (j, a) in row.iter().enumerate() {
                out[j] += a.conj() * xi;
            }
        }
        out
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o += b;
        }
        out
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o -= b;
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        let mut out = self.clone();
        for o in out.data.iter_mut() {
            *o *= s;
        }
        out
    }

    /// A - shift*I on a square matrix.
    pub fn shift_diag(&self, shift: Complex64) -> ComplexMatrix {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= shift;
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                s += self[(i, j)].norm();
            }
            best = best.max(s);
        }
        best
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Copy `block` into self with its (0,0) entry at (row, col).
    pub fn set_block(&mut self, row: usize, col: usize, block: &ComplexMatrix) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Hermitian positive-definite matrix realizing a discrete phase-space norm,
/// with a lazily computed lower Cholesky factor G = L L^H.
#[derive(Debug)]
pub struct GramMatrix {
    m: ComplexMatrix,
    chol: OnceLock<Result<ComplexMatrix, LinalgError>>,
}

impl Clone for GramMatrix {
    fn clone(&self) -> Self {
        let chol = OnceLock::new();
        if let Some(v) = self.chol.get() {
            let _ = chol.set(v.clone());
        }
        GramMatrix {
            m: self.m.clone(),
            chol,
        }
    }
}

pub const HERMITIAN_REL_TOL: f64 = 1e-12;

impl GramMatrix {
    /// Validates Hermitian symmetry to 1e-12 relative; positive definiteness
    /// is checked on first Cholesky use.
    pub fn new(m: ComplexMatrix) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::Shape(format!(
                "Gram matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.all_finite() {
            return Err(LinalgError::InvalidArgument(
                "Gram matrix has non-finite entries".into(),
            ));
        }
        let scale = m.max_abs().max(f64::MIN_POSITIVE);
        let mut asym = 0.0f64;
        for i in 0..m.rows() {
            for j in i..m.cols() {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        let asymmetry = asym / scale;
        if asymmetry > HERMITIAN_REL_TOL {
            return Err(LinalgError::NotHermitian { asymmetry });
        }
        Ok(GramMatrix {
            m,
            chol: OnceLock::new(),
        })
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix {
            m: ComplexMatrix::identity(n),
            chol: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Lower Cholesky factor, computed once on first use.
    pub fn cholesky(&self) -> Result<&ComplexMatrix, LinalgError> {
        self.chol
            .get_or_init(|| cholesky_lower(&self.m))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// <x, y>_G = y^H G x.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        let gx = self.m.mul_vec(x);
        dot(y, &gx)
    }

    /// ||x||_G; the quadratic form is clamped at zero before the square root.
    pub fn norm(&self, x: &[Complex64]) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }
}

fn cholesky_lower(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = a.rows();
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(LinalgError::NotPositiveDefinite { pivot: j });
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Ok(l)
}

/// x^H y.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn normalize(x: &mut [Complex64]) -> f64 {
    let n = vec_norm(x);
    if n > 0.0 {
        for z in x.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Solve L x = b for lower-triangular L.
pub(crate) fn solve_lower(l: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let lik = l[(i, k)];
            x[i] = x[i] - lik * x[k];
        }
        x[i] /= l[(i, i)];
    }
    x
}

/// Solve L^H x = b for lower-triangular L (back substitution).
pub(crate) fn solve_lower_adjoint(l: &ComplexMatrix, b: &[Complex64]) -> Vec<Complex64> {
    let n = l.rows();
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let v = l[(k, i)].conj();
            x[i] = x[i] - v * x[k];
        }
        x[i] /= l[(i, i)].conj();
    }
    x
}
