//! Discretization of continuous-time linear time-invariant stochastic
//! systems.
//!
//! Given `x' = A x + B u + L w`, `y = C x + M v` with white-noise power
//! spectral densities `Q` and `R`, [`vanloan::discretize`] produces the
//! zero-order-hold matrices `Ad`, `Bd` and the process-noise covariance
//! `Qd` from one exponential of the block matrix
//!
//! ```text
//! | A  L Q L^T   0  0 |
//! | 0  -A^T      0  0 |
//! | 0  0         A  B |
//! | 0  0         0  0 |
//! ```
//!
//! [`oracle`] recomputes the same quantities by Runge-Kutta integration of
//! the defining ODEs without touching `expm`, and [`sim`] samples the
//! resulting discrete system.

pub mod cli;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod sim;
pub mod vanloan;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use model::{ContinuousLtiSystem, DiscreteLtiSystem, DiscretizationOptions};
pub use vanloan::discretize;
