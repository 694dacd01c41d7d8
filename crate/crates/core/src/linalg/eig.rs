//! Dense complex eigenvalues: balancing, Householder reduction to upper
//! Hessenberg form, then single-shift implicit QR with Wilkinson shifts.

use super::{ComplexMatrix, LinalgError, MAX_EIG_DIM};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Eigenvalues of a square complex matrix, backward error O(eps)*||A||.
/// Order unspecified.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Shape(format!(
            "eigenvalues need a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() > MAX_EIG_DIM {
        return Err(LinalgError::DimensionLimit {
            dim: a.rows(),
            limit: MAX_EIG_DIM,
        });
    }
    if !a.all_finite() {
        return Err(LinalgError::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }
    let n = a.rows();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    qr_eigenvalues(h)
}

/// Parlett-Reinsch balancing with radix-2 scaling (diagonal similarity).
fn balance(a: &mut ComplexMatrix) {
    const RADIX: f64 = 2.0;
    let n = a.rows();
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].norm();
                    r += a[(i, j)].norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0;
            let s = c + r;
            let mut c2 = c;
            let mut r2 = r;
            while c2 < r2 / RADIX {
                c2 *= RADIX;
                r2 /= RADIX;
                f *= RADIX;
            }
            while c2 >= r2 * RADIX {
                c2 /= RADIX;
                r2 *= RADIX;
                f /= RADIX;
            }
            if (c2 + r2) < 0.95 * s && f != 1.0 {
                converged = false;
                let inv = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= inv;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if converged {
            break;
        }
    }
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(a: &mut ComplexMatrix) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let mut norm_sq = 0.0;
        for i in (k + 1)..n {
            norm_sq += a[(i, k)].norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let phase = if x0 == ZERO {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mu = phase * norm;
        // v = x + mu*e1; P = I - v v^H / s with s = v^H x = norm^2 + norm*|x0|
        let s = norm_sq + norm * x0.norm();
        let mut v = vec![ZERO; n];
        for i in (k + 1)..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] += mu;
        // left: A -= v (v^H A) / s
        for j in 0..n {
            let mut acc = ZERO;
            for i in (k + 1)..n {
                acc += v[i].conj() * a[(i, j)];
            }
            acc /= s;
            for i in (k + 1)..n {
                let vi = v[i];
                a[(i, j)] -= vi * acc;
            }
        }
        // right: A -= (A v) v^H / s
        for i in 0..n {
            let mut acc = ZERO;
            for j in (k + 1)..n {
                acc += a[(i, j)] * v[j];
            }
            acc /= s;
            for j in (k + 1)..n {
                let vj = v[j].conj();
                a[(i, j)] -= acc * vj;
            }
        }
        // the column is now -mu e1 exactly
        a[(k + 1, k)] = -mu;
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Complex Givens rotation [c s; -conj(s) c] (c real) zeroing b against a.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    if b == ZERO {
        return (1.0, ZERO);
    }
    if a == ZERO {
        return (0.0, b.conj() / b.norm());
    }
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

/// Eigenvalues of a 2x2 complex matrix, numerically careful quadratic.
fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    // pick the sign giving the larger |tr +/- disc| to avoid cancellation
    let q1 = tr + disc;
    let q2 = tr - disc;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 };
    if q == ZERO {
        return (ZERO, ZERO);
    }
    let l1 = q * 0.5;
    let l2 = det / l1;
    (l1, l2)
}

fn wilkinson_shift(h: &ComplexMatrix, m: usize) -> Complex64 {
    let a = h[(m - 2, m - 2)];
    let b = h[(m - 2, m - 1)];
    let c = h[(m - 1, m - 2)];
    let d = h[(m - 1, m - 1)];
    let (l1, l2) = eig2(a, b, c, d);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_eigenvalues(mut h: ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    let n = h.rows();
    let max_total = 30 * n;
    let mut evals: Vec<Complex64> = Vec::with_capacity(n);
    let mut m = n; // active leading block is 0..m
    let mut total_iter = 0usize;
    let mut stagnant = 0usize;
    while m > 0 {
        if m == 1 {
            evals.push(h[(0, 0)]);
            m = 0;
            continue;
        }
        // deflate negligible subdiagonals
        let mut l = 0;
        for q in (1..m).rev() {
            let sub = h[(q, q - 1)].norm();
            let local = h[(q - 1, q - 1)].norm() + h[(q, q)].norm();
            let thresh = f64::EPSILON * if local > 0.0 { local } else { h.max_abs() };
            if sub <= thresh {
                h[(q, q - 1)] = ZERO;
                l = q;
                break;
            }
        }
        if l == m - 1 {
            evals.push(h[(m - 1, m - 1)]);
            m -= 1;
            stagnant = 0;
            continue;
        }
        if l == m - 2 {
            let (l1, l2) = eig2(
                h[(m - 2, m - 2)],
                h[(m - 2, m - 1)],
                h[(m - 1, m - 2)],
                h[(m - 1, m - 1)],
            );
            evals.push(l1);
            evals.push(l2);
            m -= 2;
            stagnant = 0;
            continue;
        }
        if total_iter >= max_total {
            let mut partial = evals.clone();
            for i in 0..m {
                partial.push(h[(i, i)]);
            }
            return Err(LinalgError::EigNonConvergence {
                iterations: total_iter,
                partial,
            });
        }
        let shift = if stagnant > 0 && stagnant.is_multiple_of(10) {
            // exceptional shift to break symmetric stalls (m >= 3 here)
            let mag = h[(m - 1, m - 2)].norm() + h[(m - 2, m - 3)].norm();
            h[(m - 1, m - 1)] + Complex64::new(1.5 * mag, 0.0)
        } else {
            wilkinson_shift(&h, m)
        };
        qr_step(&mut h, l, m, shift);
        total_iter += 1;
        stagnant += 1;
    }
    Ok(evals)
}

/// One implicit single-shift QR sweep on the active window rows/cols l..m.
fn qr_step(h: &mut ComplexMatrix, l: usize, m: usize, shift: Complex64) {
    let mut x = h[(l, l)] - shift;
    let mut y = h[(l + 1, l)];
    for k in l..(m - 1) {
        let (c, s) = givens(x, y);
        let sc = s.conj();
        // rows k, k+1, columns from the bulge position to m-1
        let col0 = if k > l { k - 1 } else { l };
        for j in col0..m {
            let hkj = h[(k, j)];
            let hk1j = h[(k + 1, j)];
            h[(k, j)] = c * hkj + s * hk1j;
            h[(k + 1, j)] = -sc * hkj + c * hk1j;
        }
        // columns k, k+1, rows l..min(k+2, m-1)
        let row_end = (k + 2).min(m - 1);
        for i in l..=row_end {
            let hik = h[(i, k)];
            let hik1 = h[(i, k + 1)];
            h[(i, k)] = c * hik + sc * hik1;
            h[(i, k + 1)] = -s * hik + c * hik1;
        }
        if k + 2 < m {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lu_solve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Greedy multiset match: every expected value must be hit once.
    fn assert_spectrum_close(got: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(got.len(), expected.len());
        let mut remaining: Vec<Complex64> = got.to_vec();
        for e in expected {
            let (idx, dist) = remaining
                .iter()
                .enumerate()
                .map(|(i, g)| (i, (g - e).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(
                dist < tol,
                "eigenvalue {e} unmatched, nearest at distance {dist:.3e}"
            );
            remaining.swap_remove(idx);
        }
    }

    #[test]
    fn diagonal_spectrum() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)]);
        let ev = eigenvalues(&a).unwrap();
        assert_spectrum_close(&ev, &[c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 0.0)], 1e-12);
    }

    #[test]
    fn rotation_generator_spectrum() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(-1.0, 0.0), c(0.0, 0.0)],
        ]);
        let ev = eigenvalues(&a).unwrap();
        assert_spectrum_close(&ev, &[c(0.0, 1.0), c(0.0, -1.0)], 1e-12);
    }

    /// Independent oracle: Durand-Kerner roots of the characteristic
    /// polynomial obtained by Leverrier-Faddeev traces.
    fn char_poly(a: &ComplexMatrix) -> Vec<Complex64> {
        // coefficients of lambda^n + c1 lambda^{n-1} + ... + cn
        let n = a.rows();
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        let mut m = a.clone();
        let mut c_prev;
        for k in 1..=n {
            let trace: Complex64 = (0..n).map(|i| m[(i, i)]).sum();
            c_prev = -trace / (k as f64);
            coeffs.push(c_prev);
            if k < n {
                let mut shifted = m.clone();
                for i in 0..n {
                    shifted[(i, i)] += c_prev;
                }
                m = a.mul(&shifted);
            }
        }
        coeffs
    }

    fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = coeffs.len() - 1;
        let eval = |z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in coeffs {
                acc = acc * z + c;
            }
            acc
        };
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1))
            .collect();
        for _ in 0..500 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if j != i {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        roots
    }

    #[test]
    fn random_matrix_matches_characteristic_polynomial_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = ComplexMatrix::from_fn(6, 6, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let ev = eigenvalues(&a).unwrap();
        let roots = durand_kerner(&char_poly(&a));
        assert_spectrum_close(&ev, &roots, 1e-8);
    }

    #[test]
    fn defective_jordan_block_converges() {
        // J(0,4): eigenvalues all zero, classically slow for QR
        let mut a = ComplexMatrix::zeros(4, 4);
        for i in 0..3 {
            a[(i, i + 1)] = c(1.0, 0.0);
        }
        let ev = eigenvalues(&a).unwrap();
        for e in ev {
            assert!(e.norm() < 1e-3, "Jordan eigenvalue too far: {e}");
        }
    }

    #[test]
    fn badly_scaled_matrix_benefits_from_balancing() {
        // similar to diag(1e6, 1, 1e-6) conjugated catastrophically
        let d = ComplexMatrix::from_real_diag(&[1e6, 1.0, 1e-6]);
        let t = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1e5, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1e5, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let tinv = lu_solve(&t, &ComplexMatrix::identity(3)).unwrap();
        let a = t.mul(&d).mul(&tinv);
        let ev = eigenvalues(&a).unwrap();
        assert_spectrum_close(
            &ev,
            &[c(1e6, 0.0), c(1.0, 0.0), c(1e-6, 0.0)],
            2e-4, // absolute; the small eigenvalue is recovered to ~1e-8 relative of ||A||~1e10 without balancing
        );
    }
}
