//! Discretization by a single exponential of the Van Loan block matrix.
//!
//! With `n` states and `m_u` inputs the block matrix is
//!
//! ```text
//!        | A  L Q L^T   0  0 |
//! Xi  =  | 0  -A^T      0  0 |      size (3n + m_u) x (3n + m_u)
//!        | 0  0         A  B |
//!        | 0  0         0  0 |
//! ```
//!
//! and `exp(Xi dt)` carries `exp(A dt)` in block (1,1), the process-noise
//! integral `int_0^dt exp(A (dt - s)) L Q L^T exp(-A^T s) ds` in block (1,2),
//! and the zero-order-hold input matrix in block (3,4). Then
//! `Ad = U11`, `Bd = U34`, `Qd = U12 U11^T`. When `m_u = 0` the last block
//! row and column are dropped and `Xi` is `3n x 3n`.

use crate::error::{Error, Result};
use crate::linalg::{expm, Matrix};
use crate::model::{check_dt, measurement_side, ContinuousLtiSystem, DiscreteLtiSystem, DiscretizationOptions};

/// The blocks of `exp(Xi dt)` that the discretization consumes.
#[derive(Debug, Clone, PartialEq)]
pub struct VanLoanBlocks {
    /// `exp(A dt)`, n x n.
    pub upsilon11: Matrix,
    /// Process-noise integral before the trailing `exp(A dt)^T`, n x n.
    pub upsilon12: Matrix,
    /// Zero-order-hold input matrix, n x m_u.
    pub upsilon34: Matrix,
}

pub fn build_xi(sys: &ContinuousLtiSystem) -> Result<Matrix> {
    sys.validate()?;
    let n = sys.state_dim();
    let mu = sys.input_dim();
    let size = 3 * n + mu;
    let mut xi = Matrix::zeros(size, size);
    xi.set_block(0, 0, &sys.a);
    xi.set_block(0, n, &sys.noise_intensity()?);
    xi.set_block(n, n, &sys.a.transpose().scale(-1.0));
    xi.set_block(2 * n, 2 * n, &sys.a);
    if mu > 0 {
        xi.set_block(2 * n, 3 * n, &sys.b);
    }
    Ok(xi)
}

pub fn extract_blocks(upsilon: &Matrix, n: usize, mu: usize) -> Result<VanLoanBlocks> {
    let size = 3 * n + mu;
    if upsilon.shape() != (size, size) {
        return Err(Error::DimensionMismatch {
            op: "extract_blocks",
            left_name: "upsilon",
            left: upsilon.shape(),
            right_name: "(3n + m_u) square",
            right: (size, size),
        });
    }
    Ok(VanLoanBlocks {
        upsilon11: upsilon.block(0, 0, n, n),
        upsilon12: upsilon.block(0, n, n, n),
        upsilon34: upsilon.block(2 * n, 3 * n, n, mu),
    })
}

/// Computes `exp(Xi dt)` once and returns its consumed blocks.
pub fn blocks(sys: &ContinuousLtiSystem, dt: f64) -> Result<VanLoanBlocks> {
    check_dt(dt)?;
    let xi = build_xi(sys)?;
    let upsilon = expm(&xi.scale(dt)).map_err(|e| match e {
        Error::Overflow { .. } => Error::Overflow {
            context: format!("exp(Xi * dt) with dt = {dt}; ||A|| * dt is too large, try a smaller dt"),
        },
        other => other,
    })?;
    extract_blocks(&upsilon, sys.state_dim(), sys.input_dim())
}

/// Discretizes `sys` at `opts.dt`. Only `opts.dt` is used; the remaining
/// options configure the oracle.
pub fn discretize(sys: &ContinuousLtiSystem, opts: &DiscretizationOptions) -> Result<DiscreteLtiSystem> {
    assemble(sys, opts.dt)
}

pub(crate) fn assemble(sys: &ContinuousLtiSystem, dt: f64) -> Result<DiscreteLtiSystem> {
    let b = blocks(sys, dt)?;
    let qd = b.upsilon12.matmul(&b.upsilon11.transpose())?.symmetrize();
    let (cd, md, rd) = measurement_side(sys, dt);
    Ok(DiscreteLtiSystem {
        ad: b.upsilon11,
        bd: b.upsilon34,
        cd,
        md,
        qd,
        rd,
        dt,
    })
}
