//! Continuous- and discrete-time system types and their validation.
//!
//! Continuous model:
//!
//! ```text
//! x'(t) = A x(t) + B u(t) + L w(t)      E[w(t) w(s)^T] = Q delta(t - s)
//! y(t)  = C x(t) + M v(t)               E[v(t) v(s)^T] = R delta(t - s)
//! ```
//!
//! with `w` and `v` zero-mean, Gaussian and mutually uncorrelated. The
//! discrete model sampled at period `dt` is
//!
//! ```text
//! x_k = Ad x_{k-1} + Bd u_{k-1} + w_{k-1}     w_k ~ N(0, Qd)
//! y_k = Cd x_k + Md v_k                        v_k ~ N(0, Rd)
//! ```
//!
//! Units are not enforced. `A` is in 1/time, `Q` and `R` in
//! (signal units)^2 x time.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};

/// Relative tolerance on `||X - X^T||` and on negative eigenvalues of `Q`, `R`.
pub const SPECTRAL_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_ORACLE_STEPS: usize = 2000;
pub const DEFAULT_COMPARE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousLtiSystem {
    /// State matrix, n x n.
    pub a: Matrix,
    /// Input matrix, n x m_u.
    pub b: Matrix,
    /// Noise injection, n x m_w.
    pub l: Matrix,
    /// Output matrix, p x n.
    pub c: Matrix,
    /// Measurement-noise matrix, p x m_v.
    pub m: Matrix,
    /// Process-noise power spectral density, m_w x m_w.
    pub q: Matrix,
    /// Measurement-noise power spectral density, m_v x m_v.
    pub r: Matrix,
}

impl ContinuousLtiSystem {
    /// System with no deterministic input and no measurement noise.
    pub fn new(a: Matrix, l: Matrix, q: Matrix, c: Matrix) -> Self {
        let n = a.rows();
        let p = c.rows();
        Self {
            a,
            b: Matrix::zeros(n, 0),
            l,
            c,
            m: Matrix::zeros(p, 0),
            q,
            r: Matrix::zeros(0, 0),
        }
    }

    pub fn with_input(mut self, b: Matrix) -> Self {
        self.b = b;
        self
    }

    pub fn with_measurement_noise(mut self, m: Matrix, r: Matrix) -> Self {
        self.m = m;
        self.r = r;
        self
    }

    pub fn state_dim(&self) -> usize {
        self.a.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.b.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.c.rows()
    }

    /// `L Q L^T`, the only way the process noise enters the discretization.
    pub fn noise_intensity(&self) -> Result<Matrix> {
        self.l.matmul(&self.q)?.matmul(&self.l.transpose())
    }

    /// Checks every structural and stochastic rule, collecting all
    /// violations. Dimension rules are reported first, in the order
    /// A, B, L, C, M, Q, R; then symmetry and definiteness of Q, then R.
    pub fn validate(&self) -> std::result::Result<(), ValidationErrors> {
        let mut found = Vec::new();
        let n = self.a.rows();

        if !self.a.is_square() {
            found.push(Violation::NotSquare {
                name: "A",
                shape: self.a.shape(),
            });
        } else if n == 0 {
            found.push(Violation::EmptyState);
        }

        let dim = |name, mat: &Matrix, other, other_mat: &Matrix, rule| Violation::Dimension {
            name,
            shape: mat.shape(),
            other,
            other_shape: other_mat.shape(),
            rule,
        };
        if self.b.rows() != n {
            found.push(dim("B", &self.b, "A", &self.a, "B must have one row per state"));
        }
        if self.l.rows() != n {
            found.push(dim("L", &self.l, "A", &self.a, "L must have one row per state"));
        }
        if self.c.cols() != n {
            found.push(dim("C", &self.c, "A", &self.a, "C must have one column per state"));
        }
        if self.m.rows() != self.c.rows() {
            found.push(dim("M", &self.m, "C", &self.c, "M and C must have the same number of rows"));
        }
        if !self.q.is_square() {
            found.push(Violation::NotSquare {
                name: "Q",
                shape: self.q.shape(),
            });
        } else if self.q.rows() != self.l.cols() {
            found.push(dim("Q", &self.q, "L", &self.l, "Q must be m_w x m_w where L is n x m_w"));
        }
        if !self.r.is_square() {
            found.push(Violation::NotSquare {
                name: "R",
                shape: self.r.shape(),
            });
        } else if self.r.rows() != self.m.cols() {
            found.push(dim("R", &self.r, "M", &self.m, "R must be m_v x m_v where M is p x m_v"));
        }

        for (name, mat) in [("Q", &self.q), ("R", &self.r)] {
            if mat.is_square() {
                found.extend(spectral_violations(name, mat));
            }
        }

        if found.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors(found))
        }
    }
}

fn spectral_violations(name: &'static str, mat: &Matrix) -> Vec<Violation> {
    let norm = mat.norm_inf();
    let asymmetry = mat.asymmetry();
    if asymmetry > SPECTRAL_TOLERANCE * norm {
        return vec![Violation::Asymmetric { name, asymmetry }];
    }
    let min_eigenvalue = symmetric_eigenvalues(mat)
        .expect("square by construction")
        .first()
        .copied()
        .unwrap_or(0.0);
    if min_eigenvalue < -SPECTRAL_TOLERANCE * norm {
        return vec![Violation::Indefinite { name, min_eigenvalue }];
    }
    Vec::new()
}

/// Returns the system unchanged when it passes [`ContinuousLtiSystem::validate`].
pub fn validate_system(sys: ContinuousLtiSystem) -> std::result::Result<ContinuousLtiSystem, ValidationErrors> {
    sys.validate().map(|()| sys)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EmptyState,
    NotSquare {
        name: &'static str,
        shape: (usize, usize),
    },
    Dimension {
        name: &'static str,
        shape: (usize, usize),
        other: &'static str,
        other_shape: (usize, usize),
        rule: &'static str,
    },
    Asymmetric {
        name: &'static str,
        asymmetry: f64,
    },
    Indefinite {
        name: &'static str,
        min_eigenvalue: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyState => write!(f, "A must have at least one state"),
            Violation::NotSquare { name, shape } => {
                write!(f, "{name} must be square, got {}x{}", shape.0, shape.1)
            }
            Violation::Dimension {
                name,
                shape,
                other,
                other_shape,
                rule,
            } => write!(
                f,
                "dimension mismatch: {name} is {}x{} but {other} is {}x{} ({rule})",
                shape.0, shape.1, other_shape.0, other_shape.1
            ),
            Violation::Asymmetric { name, asymmetry } => {
                write!(f, "{name} is not symmetric (max |{name} - {name}^T| = {asymmetry:e})")
            }
            Violation::Indefinite { name, min_eigenvalue } => {
                write!(f, "{name} is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<Violation>);

impl ValidationErrors {
    pub fn violations(&self) -> &[Violation] {
        &self.0
    }
}

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid system: ")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLtiSystem {
    pub ad: Matrix,
    pub bd: Matrix,
    pub cd: Matrix,
    pub md: Matrix,
    pub qd: Matrix,
    pub rd: Matrix,
    pub dt: f64,
}

impl DiscreteLtiSystem {
    pub fn state_dim(&self) -> usize {
        self.ad.rows()
    }

    pub fn input_dim(&self) -> usize {
        self.bd.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.cd.rows()
    }

    pub fn measurement_noise_dim(&self) -> usize {
        self.md.cols()
    }
}

/// `Cd = C`, `Md = M`, `Rd = R / dt` (one division per entry).
pub(crate) fn measurement_side(sys: &ContinuousLtiSystem, dt: f64) -> (Matrix, Matrix, Matrix) {
    let rd = if sys.r.is_empty() {
        Matrix::zeros(0, 0)
    } else {
        sys.r.map(|v| v / dt)
    };
    (sys.c.clone(), sys.m.clone(), rd)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationOptions {
    /// Sampling period.
    pub dt: f64,
    /// Uniform RK4 steps used by the oracle over one period.
    pub oracle_steps: usize,
    /// Relative tolerance for method-vs-oracle comparison.
    pub compare_tolerance: f64,
}

impl DiscretizationOptions {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            oracle_steps: DEFAULT_ORACLE_STEPS,
            compare_tolerance: DEFAULT_COMPARE_TOLERANCE,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dt(self.dt)?;
        if self.oracle_steps == 0 {
            return Err(Error::InvalidOption("steps must be at least 1".into()));
        }
        if !(self.compare_tolerance.is_finite() && self.compare_tolerance > 0.0) {
            return Err(Error::InvalidOption("tol must be positive".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidOption("dt must be positive".into()))
    }
}
