use crate::error::{Error, Result};

use super::Matrix;

/// Relative diagonal shifts tried in order; each is multiplied by
/// `max(1, ||q||_inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JitterPolicy {
    pub ladder: Vec<f64>,
}

impl JitterPolicy {
    /// Plain factorization, no diagonal shift.
    pub fn none() -> Self {
        Self { ladder: vec![0.0] }
    }
}

impl Default for JitterPolicy {
    fn default() -> Self {
        Self {
            ladder: vec![0.0, 1e-14, 1e-12, 1e-10],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    /// Lower-triangular `F` with `F F^T ~= q + jitter * I`.
    pub lower: Matrix,
    /// Absolute diagonal shift that was applied.
    pub jitter: f64,
}

/// Relative symmetry tolerance accepted on input.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Cholesky factorization for symmetric positive semi-definite matrices.
///
/// A pivot that vanishes to rounding level produces a zero column, as long
/// as the remaining entries of that column vanish too; this keeps exactly
/// singular inputs (zero blocks, rank-one covariances) exact. Otherwise the
/// jitter ladder shifts the diagonal until the factorization succeeds.
pub fn cholesky_psd(q: &Matrix, policy: &JitterPolicy) -> Result<CholeskyFactor> {
    if !q.is_square() {
        return Err(Error::NotSquare {
            op: "cholesky_psd",
            rows: q.rows(),
            cols: q.cols(),
        });
    }
    let scale = q.norm_inf().max(1.0);
    let asymmetry = q.asymmetry();
    let tolerance = SYMMETRY_TOLERANCE * scale;
    if asymmetry > tolerance {
        return Err(Error::NotSymmetric { asymmetry, tolerance });
    }

    let mut first_failure = None;
    for &rel in &policy.ladder {
        let jitter = rel * scale;
        let mut shifted = q.clone();
        shifted.add_diagonal(jitter);
        match factor(&shifted, scale) {
            Ok(lower) => return Ok(CholeskyFactor { lower, jitter }),
            Err(e) => {
                first_failure.get_or_insert(e);
            }
        }
    }
    Err(first_failure.unwrap_or(Error::Indefinite { index: 0, pivot: f64::NAN }))
}

fn factor(a: &Matrix, scale: f64) -> Result<Matrix> {
    let n = a.rows();
    let max_diag = (0..n).map(|i| a.get(i, i)).fold(0.0, f64::max);
    let pivot_tol = 4.0 * n as f64 * f64::EPSILON * max_diag;
    let residual_tol = 16.0 * n as f64 * f64::EPSILON * scale;

    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let d = a.get(j, j) - (0..j).map(|k| l.get(j, k).powi(2)).sum::<f64>();
        let residual = |l: &Matrix, i: usize| a.get(i, j) - (0..j).map(|k| l.get(i, k) * l.get(j, k)).sum::<f64>();
        if d > pivot_tol {
            let ljj = d.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let r = residual(&l, i);
                l.set(i, j, r / ljj);
            }
        } else if d >= -pivot_tol {
            if ((j + 1)..n).any(|i| residual(&l, i).abs() > residual_tol) {
                return Err(Error::Indefinite { index: j, pivot: d });
            }
        } else {
            return Err(Error::Indefinite { index: j, pivot: d });
        }
    }
    Ok(l)
}
