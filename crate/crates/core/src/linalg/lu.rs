//! Complex LU factorization with partial pivoting.

use super::{ComplexMatrix, LinalgError};
use num_complex::Complex64;

/// Packed LU factors of a square matrix, P A = L U, with the row-swap
/// sequence in `piv` (LAPACK style: step k swapped rows k and `piv[k]`).
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: ComplexMatrix,
    piv: Vec<usize>,
}

pub fn lu_factor(a: &ComplexMatrix) -> Result<LuFactors, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Shape(format!(
            "LU needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut lu = a.clone();
    let mut piv = vec![0usize; n];
    for k in 0..n {
        let mut max_row = k;
        let mut max_val = lu[(k, k)].norm();
        for i in (k + 1)..n {
            let v = lu[(i, k)].norm();
            if v > max_val {
                max_val = v;
                max_row = i;
            }
        }
        if max_val == 0.0 {
            return Err(LinalgError::Singular { pivot: k });
        }
        piv[k] = max_row;
        if max_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(max_row, j)];
                lu[(max_row, j)] = tmp;
            }
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let m = lu[(i, k)] / pivot;
            lu[(i, k)] = m;
            if m != Complex64::new(0.0, 0.0) {
                for j in (k + 1)..n {
                    let v = lu[(k, j)];
                    lu[(i, j)] -= m * v;
                }
            }
        }
    }
    Ok(LuFactors { lu, piv })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    /// Solve A x = b.
    pub fn solve_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        // L y = P b (unit lower)
        for i in 1..n {
            let mut acc = x[i];
            for k in 0..i {
                acc -= self.lu[(i, k)] * x[k];
            }
            x[i] = acc;
        }
        // U x = y
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in (i + 1)..n {
                acc -= self.lu[(i, k)] * x[k];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solve A^H x = b via U^H L^H P x = b.
    pub fn solve_adjoint_vec(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // U^H w = b (U^H is lower triangular)
        for i in 0..n {
            let mut acc = x[i];
            for k in 0..i {
                acc -= self.lu[(k, i)].conj() * x[k];
            }
            x[i] = acc / self.lu[(i, i)].conj();
        }
        // L^H y = w (upper triangular, unit diagonal)
        for i in (0..n).rev() {
            let mut acc = x[i];
            for k in (i + 1)..n {
                acc -= self.lu[(k, i)].conj() * x[k];
            }
            x[i] = acc;
        }
        // x = P^T y: undo the swaps in reverse
        for k in (0..n).rev() {
            x.swap(k, self.piv[k]);
        }
        x
    }

    pub fn solve_mat(&self, b: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(b.rows(), self.dim());
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        let mut col = vec![Complex64::new(0.0, 0.0); b.rows()];
        for j in 0..b.cols() {
            for i in 0..b.rows() {
                col[i] = b[(i, j)];
            }
            let x = self.solve_vec(&col);
            for i in 0..b.rows() {
                out[(i, j)] = x[i];
            }
        }
        out
    }
}

/// One-shot solve of A X = B.
pub fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::Shape(format!(
            "rhs has {} rows, matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    Ok(lu_factor(a)?.solve_mat(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    #[test]
    fn identity_solve_returns_rhs() {
        let a = ComplexMatrix::identity(3);
        let b =
            ComplexMatrix::from_rows(&[vec![c(1.0, 2.0)], vec![c(-0.5, 0.0)], vec![c(3.0, -1.0)]]);
        let x = lu_solve(&a, &b).unwrap();
        assert!(x.sub(&b).max_abs() == 0.0);
    }

    #[test]
    fn diagonal_solve() {
        let a = ComplexMatrix::from_real_diag(&[2.0, 4.0]);
        let b = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0)], vec![c(4.0, 0.0)]]);
        let x = lu_solve(&a, &b).unwrap();
        assert!((x[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn recovers_constructed_solution_8x8() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(8, &mut rng);
        let xstar = random_matrix(8, &mut rng);
        let b = a.mul(&xstar);
        let x = lu_solve(&a, &b).unwrap();
        let scale = a.max_abs() * x.max_abs();
        assert!(x.sub(&xstar).max_abs() < 1e-10 * scale.max(1.0));
        // residual contract
        let res = a.mul(&x).sub(&b).max_abs();
        assert!(res <= 1e-10 * a.max_abs() * x.max_abs());
    }

    #[test]
    fn singular_pivot_reports_index() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        match lu_factor(&a) {
            Err(LinalgError::Singular { pivot }) => assert_eq!(pivot, 1),
            other => panic!("expected singular error, got {other:?}"),
        }
    }

    #[test]
    fn adjoint_solve_matches_explicit_adjoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = random_matrix(6, &mut rng);
        let b: Vec<Complex64> = (0..6)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let f = lu_factor(&a).unwrap();
        let x = f.solve_adjoint_vec(&b);
        let back = a.adjoint().mul_vec(&x);
        for (u, v) in back.iter().zip(b.iter()) {
            assert!((u - v).norm() < 1e-11);
        }
    }
}
