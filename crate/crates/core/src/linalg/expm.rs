//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (Higham, "The scaling and squaring method for the matrix
//! exponential revisited", SIAM J. Matrix Anal. Appl. 26(4), 2005).
//!
//! The Padé degree m in {3, 5, 7, 9, 13} is the smallest whose 1-norm
//! threshold `theta_m` bounds `||A||_1`; above `theta_13` the input is
//! scaled by `2^-s` and the degree-13 result squared `s` times.

use crate::error::{Error, Result};

use super::decomp::Lu;
use super::Matrix;

const THETA_3: f64 = 1.495585217958292e-2;
#[allow(clippy::excessive_precision)]
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068e0;
const THETA_13: f64 = 5.371920351148152e0;

const PADE_3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE_5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE_7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const PADE_9: [f64; 10] = [
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
const PADE_13: [f64; 14] = [
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

/// Computes `exp(a)`.
///
/// The zero matrix maps to the exact identity. Results with non-finite
/// entries are reported as [`Error::Overflow`].
pub fn expm(a: &Matrix) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "expm",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if a.as_slice().iter().all(|&v| v == 0.0) {
        return Ok(Matrix::identity(n));
    }

    let norm = a.norm_one();
    let result = if norm <= THETA_3 {
        pade_low(a, &PADE_3)?
    } else if norm <= THETA_5 {
        pade_low(a, &PADE_5)?
    } else if norm <= THETA_7 {
        pade_low(a, &PADE_7)?
    } else if norm <= THETA_9 {
        pade_low(a, &PADE_9)?
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0);
        if s > 1100.0 {
            return Err(overflow());
        }
        let s = s as i32;
        let scaled = a.scale(2f64.powi(-s));
        let mut r = pade_13(&scaled)?;
        for _ in 0..s {
            r = r.matmul(&r)?;
            if !r.all_finite() {
                return Err(overflow());
            }
        }
        r
    };

    if !result.all_finite() {
        return Err(overflow());
    }
    Ok(result)
}

fn overflow() -> Error {
    Error::Overflow {
        context: "expm (entries exceed the representable range)".into(),
    }
}

/// Degrees 3 through 9: `U = A * sum b_{2k+1} A^{2k}`, `V = sum b_{2k} A^{2k}`.
fn pade_low(a: &Matrix, b: &[f64]) -> Result<Matrix> {
    let n = a.rows();
    let a2 = a.matmul(a)?;
    let mut even_powers = vec![Matrix::identity(n)];
    for _ in 1..(b.len() / 2) {
        let next = even_powers.last().unwrap().matmul(&a2)?;
        even_powers.push(next);
    }
    let mut u_inner = Matrix::zeros(n, n);
    let mut v = Matrix::zeros(n, n);
    for (k, pow) in even_powers.iter().enumerate() {
        v.axpy(b[2 * k], pow);
        u_inner.axpy(b[2 * k + 1], pow);
    }
    let u = a.matmul(&u_inner)?;
    solve_pade(&u, &v)
}

fn pade_13(a: &Matrix) -> Result<Matrix> {
    let b = &PADE_13;
    let n = a.rows();
    let ident = Matrix::identity(n);
    let a2 = a.matmul(a)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a4.matmul(&a2)?;

    let mut u_high = a6.scale(b[13]);
    u_high.axpy(b[11], &a4);
    u_high.axpy(b[9], &a2);
    let mut u_inner = a6.matmul(&u_high)?;
    u_inner.axpy(b[7], &a6);
    u_inner.axpy(b[5], &a4);
    u_inner.axpy(b[3], &a2);
    u_inner.axpy(b[1], &ident);
    let u = a.matmul(&u_inner)?;

    let mut v_high = a6.scale(b[12]);
    v_high.axpy(b[10], &a4);
    v_high.axpy(b[8], &a2);
    let mut v = a6.matmul(&v_high)?;
    v.axpy(b[6], &a6);
    v.axpy(b[4], &a4);
    v.axpy(b[2], &a2);
    v.axpy(b[0], &ident);

    solve_pade(&u, &v)
}

/// `r = (V - U)^{-1} (V + U)`.
fn solve_pade(u: &Matrix, v: &Matrix) -> Result<Matrix> {
    let denom = v.sub(u)?;
    let numer = v.add(u)?;
    if !denom.all_finite() || !numer.all_finite() {
        return Err(overflow());
    }
    Ok(Lu::new(&denom, "expm Padé denominator")?.solve(&numer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;

    fn close(a: &Matrix, b: &Matrix, tol: f64) -> bool {
        a.max_abs_diff(b).unwrap() <= tol
    }

    /// Truncated Taylor series with many terms, used as an independent
    /// reference for small-norm inputs.
    fn taylor(a: &Matrix, terms: usize) -> Matrix {
        let n = a.rows();
        let mut sum = Matrix::identity(n);
        let mut term = Matrix::identity(n);
        for k in 1..terms {
            term = term.matmul(a).unwrap().scale(1.0 / k as f64);
            sum = sum.add(&term).unwrap();
        }
        sum
    }

    #[test]
    fn zero_is_identity() {
        for n in 1..5 {
            assert_eq!(expm(&Matrix::zeros(n, n)).unwrap(), Matrix::identity(n));
        }
    }

    #[test]
    fn diagonal() {
        let e = expm(&Matrix::diag(&[1.0, -1.0]).unwrap()).unwrap();
        let want = Matrix::diag(&[1f64.exp(), (-1f64).exp()]).unwrap();
        assert!(close(&e, &want, 1e-14), "{e:?}");
    }

    #[test]
    fn nilpotent() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]], 0).unwrap();
        let want = Matrix::from_rows(&[[1.0, 1.0], [0.0, 1.0]], 0).unwrap();
        assert!(close(&expm(&a).unwrap(), &want, 1e-14));
    }

    #[test]
    fn rotation_generator() {
        let t = std::f64::consts::FRAC_PI_2;
        let a = Matrix::from_rows(&[[0.0, -t], [t, 0.0]], 0).unwrap();
        let want = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]], 0).unwrap();
        assert!(close(&expm(&a).unwrap(), &want, 1e-14));
    }

    #[test]
    fn every_pade_degree_matches_taylor() {
        // One matrix per norm bracket, including the scaled degree-13 path.
        let base = Matrix::from_rows(&[[0.3, -0.7, 0.1], [0.2, 0.1, -0.4], [-0.5, 0.6, 0.2]], 0).unwrap();
        let unit = base.scale(1.0 / base.norm_one());
        for norm in [0.01, 0.2, 0.9, 2.0, 5.0, 12.0] {
            let a = unit.scale(norm);
            let reference = taylor(&a, 80);
            let got = expm(&a).unwrap();
            let tol = 1e-14 * reference.max_abs().max(1.0) * (1.0 + norm);
            assert!(close(&got, &reference, tol), "norm {norm}");
        }
    }

    #[test]
    fn determinant_matches_trace() {
        let a = Matrix::from_rows(&[[0.1, 2.0, -1.0], [0.4, -0.3, 0.2], [1.0, 0.0, 0.5]], 0).unwrap();
        let e = expm(&a).unwrap();
        let det = determinant(&e).unwrap();
        assert!((det - a.trace().exp()).abs() <= 1e-12 * det.abs());
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(expm(&Matrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn overflow_reported() {
        let a = Matrix::diag(&[800.0, 1.0]).unwrap();
        assert!(matches!(expm(&a), Err(Error::Overflow { .. })));
        let big = Matrix::diag(&[1e300, -1e300]).unwrap();
        assert!(matches!(expm(&big), Err(Error::Overflow { .. })));
    }
}
