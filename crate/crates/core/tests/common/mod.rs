#![allow(dead_code)]

use lti_discretize::linalg::Matrix;
use lti_discretize::model::ContinuousLtiSystem;
use lti_discretize::oracle::{random_stable_system, RandomDims};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seed of the shared random suite.
pub const SUITE_SEED: u64 = 20240817;

/// Reproducible random stable systems (n <= 6, m_u <= 2).
pub fn random_suite(count: usize) -> Vec<ContinuousLtiSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..count)
        .map(|_| {
            let dims = RandomDims::sample(&mut rng);
            random_stable_system(&mut rng, dims)
        })
        .collect()
}

pub fn m<const C: usize>(rows: &[[f64; C]]) -> Matrix {
    Matrix::from_rows(rows, C).unwrap()
}

pub fn scalar_system() -> ContinuousLtiSystem {
    ContinuousLtiSystem::new(m(&[[-1.0]]), m(&[[1.0]]), m(&[[3.0]]), m(&[[1.0]])).with_input(m(&[[2.0]]))
}

pub fn double_integrator(q: f64) -> ContinuousLtiSystem {
    ContinuousLtiSystem::new(m(&[[0.0, 1.0], [0.0, 0.0]]), m(&[[0.0], [1.0]]), m(&[[q]]), m(&[[1.0, 0.0]]))
        .with_input(m(&[[0.0], [1.0]]))
        .with_measurement_noise(m(&[[1.0]]), m(&[[0.04]]))
}

pub fn rel(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

pub fn max_rel(got: &Matrix, want: &Matrix) -> f64 {
    got.max_abs_diff(want).unwrap() / want.norm_inf()
}
