//! Matrix exponential by scaling and squaring with diagonal Pade
//! approximants (orders 3/5/7/9/13 chosen from the 1-norm).

use super::{lu_factor, ComplexMatrix, LinalgError};
use num_complex::Complex64;

// published switching thresholds, digits kept as tabulated
#[allow(clippy::excessive_precision)]
const THETA_3: f64 = 1.495585217958292e-2;
#[allow(clippy::excessive_precision)]
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

const MAX_SQUARINGS: u32 = 64;

/// exp(t A) for t >= 0.
pub fn matrix_exponential(a: &ComplexMatrix, t: f64) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::Shape(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(LinalgError::InvalidArgument(format!(
            "time must be finite and >= 0, got {t}"
        )));
    }
    let b = a.scale(Complex64::new(t, 0.0));
    if !b.all_finite() {
        return Err(LinalgError::ExpOverflow {
            norm: f64::INFINITY,
        });
    }
    expm(&b)
}

fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let norm = a.one_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(a.rows()));
    }
    let result = if norm <= THETA_9 {
        let order: &[f64] = if norm <= THETA_3 {
            &B3
        } else if norm <= THETA_5 {
            &B5
        } else if norm <= THETA_7 {
            &B7
        } else {
            &B9
        };
        pade_low(a, order)?
    } else {
        let s = ((norm / THETA_13).log2().ceil().max(0.0)) as u32;
        if s > MAX_SQUARINGS {
            return Err(LinalgError::ExpOverflow { norm });
        }
        let scaled = a.scale(Complex64::new(0.5f64.powi(s as i32), 0.0));
        let mut e = pade13(&scaled)?;
        for _ in 0..s {
            e = e.mul(&e);
        }
        e
    };
    if !result.all_finite() {
        return Err(LinalgError::ExpOverflow { norm });
    }
    Ok(result)
}

/// [m/m] Pade via explicit even/odd splitting: U = A * sum b_{2k+1} A^{2k},
/// V = sum b_{2k} A^{2k}; exp(A) ~ (V - U)^{-1} (V + U).
fn pade_low(a: &ComplexMatrix, b: &[f64]) -> Result<ComplexMatrix, LinalgError> {
    let n = a.rows();
    let a2 = a.mul(a);
    let mut even = ComplexMatrix::identity(n).scale(Complex64::new(b[0], 0.0));
    let mut odd = ComplexMatrix::identity(n).scale(Complex64::new(b[1], 0.0));
    let mut pow = ComplexMatrix::identity(n);
    let mut k = 2;
    while k < b.len() {
        pow = pow.mul(&a2);
        even = even.add(&pow.scale(Complex64::new(b[k], 0.0)));
        if k + 1 < b.len() {
            odd = odd.add(&pow.scale(Complex64::new(b[k + 1], 0.0)));
        }
        k += 2;
    }
    let u = a.mul(&odd);
    solve_pade(&even, &u)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let b = &B13;
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let a2 = a.mul(a);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);
    let w1 = a6
        .scale(c(b[13]))
        .add(&a4.scale(c(b[11])))
        .add(&a2.scale(c(b[9])));
    let w2 = a6
        .scale(c(b[7]))
        .add(&a4.scale(c(b[5])))
        .add(&a2.scale(c(b[3])))
        .add(&id.scale(c(b[1])));
    let u = a.mul(&a6.mul(&w1).add(&w2));
    let z1 = a6
        .scale(c(b[12]))
        .add(&a4.scale(c(b[10])))
        .add(&a2.scale(c(b[8])));
    let v = a6
        .mul(&z1)
        .add(&a6.scale(c(b[6])))
        .add(&a4.scale(c(b[4])))
        .add(&a2.scale(c(b[2])))
        .add(&id.scale(c(b[0])));
    solve_pade(&v, &u)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// (V - U)^{-1} (V + U)
fn solve_pade(v: &ComplexMatrix, u: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let lhs = v.sub(u);
    let rhs = v.add(u);
    let f = lu_factor(&lhs)?;
    Ok(f.solve_mat(&rhs))
}
