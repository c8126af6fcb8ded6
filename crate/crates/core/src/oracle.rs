//! Reference discretization by direct integration of the defining ODEs.
//!
//! Over `[0, dt]` with classical fourth-order Runge-Kutta:
//!
//! ```text
//! X' = A X,                 X(0) = I   ->  Ad
//! Y' = A Y + B,             Y(0) = 0   ->  Bd
//! P' = A P + P A^T + L Q L^T, P(0) = 0 ->  Qd
//! ```
//!
//! This path never calls `expm`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{check_dt, measurement_side, ContinuousLtiSystem, DiscreteLtiSystem};

pub fn oracle_discretize(sys: &ContinuousLtiSystem, dt: f64, steps: usize) -> Result<DiscreteLtiSystem> {
    sys.validate()?;
    check_dt(dt)?;
    if steps == 0 {
        return Err(Error::InvalidOption("steps must be at least 1".into()));
    }
    let n = sys.state_dim();
    let a = &sys.a;
    let at = a.transpose();
    let forcing = sys.noise_intensity()?;

    let ad = rk4(Matrix::identity(n), dt, steps, |x| a.matmul(x).expect("square"))?;
    let bd = rk4(Matrix::zeros(n, sys.input_dim()), dt, steps, |y| {
        a.matmul(y).expect("n rows").add(&sys.b).expect("same shape")
    })?;
    let qd = rk4(Matrix::zeros(n, n), dt, steps, |p| {
        let mut dp = a.matmul(p).expect("square");
        dp.axpy(1.0, &p.matmul(&at).expect("square"));
        dp.axpy(1.0, &forcing);
        dp
    })?;

    let (cd, md, rd) = measurement_side(sys, dt);
    Ok(DiscreteLtiSystem { ad, bd, cd, md, qd, rd, dt })
}

/// Fixed-step RK4 for an autonomous matrix ODE `Z' = f(Z)`.
fn rk4(mut z: Matrix, dt: f64, steps: usize, f: impl Fn(&Matrix) -> Matrix) -> Result<Matrix> {
    let h = dt / steps as f64;
    let stage = |z: &Matrix, k: &Matrix, s: f64| {
        let mut out = z.clone();
        out.axpy(s, k);
        out
    };
    for step in 0..steps {
        let k1 = f(&z);
        let k2 = f(&stage(&z, &k1, 0.5 * h));
        let k3 = f(&stage(&z, &k2, 0.5 * h));
        let k4 = f(&stage(&z, &k3, h));
        let mut sum = k1;
        sum.axpy(2.0, &k2);
        sum.axpy(2.0, &k3);
        sum.axpy(1.0, &k4);
        z.axpy(1.0, &sum.map(|v| v * h / 6.0));
        if !z.all_finite() {
            return Err(Error::Divergence { step });
        }
    }
    Ok(z)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MatrixError {
    pub max_abs: f64,
    /// `max_abs / ||reference||_inf`; for an all-zero reference this is
    /// zero when the method is also zero and infinite otherwise.
    pub max_rel: f64,
    pub pass: bool,
}

impl MatrixError {
    fn measure(method: &Matrix, reference: &Matrix, tol: f64) -> Self {
        let max_abs = method.max_abs_diff(reference).expect("shapes checked");
        let norm = reference.norm_inf();
        let max_rel = if norm > 0.0 {
            max_abs / norm
        } else if max_abs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            max_abs,
            max_rel,
            pass: max_rel <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub ad: MatrixError,
    pub bd: MatrixError,
    pub qd: MatrixError,
    /// Cd, Md and Rd are bit-identical.
    pub passthrough_exact: bool,
    /// Every relative error is within `tolerance`.
    pub pass: bool,
}

pub fn compare(method: &DiscreteLtiSystem, reference: &DiscreteLtiSystem, tol: f64) -> Result<ComparisonReport> {
    if method.dt != reference.dt {
        return Err(Error::InvalidOption(format!(
            "cannot compare systems sampled at dt = {} and dt = {}",
            method.dt, reference.dt
        )));
    }
    let pairs: [(&'static str, &Matrix, &Matrix); 6] = [
        ("Ad", &method.ad, &reference.ad),
        ("Bd", &method.bd, &reference.bd),
        ("Cd", &method.cd, &reference.cd),
        ("Md", &method.md, &reference.md),
        ("Qd", &method.qd, &reference.qd),
        ("Rd", &method.rd, &reference.rd),
    ];
    for (name, x, y) in pairs {
        if x.shape() != y.shape() {
            return Err(Error::DimensionMismatch {
                op: "compare",
                left_name: name,
                left: x.shape(),
                right_name: "reference",
                right: y.shape(),
            });
        }
    }
    let ad = MatrixError::measure(&method.ad, &reference.ad, tol);
    let bd = MatrixError::measure(&method.bd, &reference.bd, tol);
    let qd = MatrixError::measure(&method.qd, &reference.qd, tol);
    let bits = |x: &Matrix, y: &Matrix| x.as_slice().iter().zip(y.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits());
    let passthrough_exact =
        bits(&method.cd, &reference.cd) && bits(&method.md, &reference.md) && bits(&method.rd, &reference.rd);
    Ok(ComparisonReport {
        tolerance: tol,
        pass: ad.pass && bd.pass && qd.pass,
        ad,
        bd,
        qd,
        passthrough_exact,
    })
}

/// Dimensions of a generated test system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomDims {
    pub n: usize,
    pub inputs: usize,
    pub noise: usize,
    pub outputs: usize,
    pub measurement_noise: usize,
}

impl RandomDims {
    /// n in 1..=6, m_u in 0..=2, m_w in 1..=n, p in 0..=2, m_v in 0..=p.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let n = rng.random_range(1..=6);
        let outputs = rng.random_range(0..=2);
        Self {
            n,
            inputs: rng.random_range(0..=2),
            noise: rng.random_range(1..=n),
            outputs,
            measurement_noise: rng.random_range(0..=outputs),
        }
    }
}

/// Random stable system: entries i.i.d. uniform on [-1, 1], then
/// `A <- A - (1 + rho) I` with `rho` the Gershgorin bound on the spectral
/// abscissa, so every eigenvalue has real part at most -1. `Q` and `R` are
/// `G G^T` with `G` uniform on [-1, 1].
pub fn random_stable_system<R: Rng>(rng: &mut R, dims: RandomDims) -> ContinuousLtiSystem {
    let mut uniform = |rows: usize, cols: usize| {
        Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..=1.0))
    };
    let RandomDims {
        n,
        inputs,
        noise,
        outputs,
        measurement_noise,
    } = dims;
    let mut a = uniform(n, n);
    let rho = gershgorin_abscissa(&a);
    a.add_diagonal(-(1.0 + rho));
    let b = uniform(n, inputs);
    let l = uniform(n, noise);
    let gq = uniform(noise, noise);
    let c = uniform(outputs, n);
    let m = uniform(outputs, measurement_noise);
    let gr = uniform(measurement_noise, measurement_noise);
    let gram = |g: &Matrix| g.matmul(&g.transpose()).expect("square").symmetrize();
    ContinuousLtiSystem {
        a,
        b,
        l,
        c,
        m,
        q: gram(&gq),
        r: gram(&gr),
    }
}

/// `max_i (a_ii + sum_{j != i} |a_ij|)`, an upper bound on `max Re(lambda)`.
pub fn gershgorin_abscissa(a: &Matrix) -> f64 {
    (0..a.rows())
        .map(|i| {
            let off: f64 = (0..a.cols()).filter(|&j| j != i).map(|j| a.get(i, j).abs()).sum();
            a.get(i, i) + off
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
