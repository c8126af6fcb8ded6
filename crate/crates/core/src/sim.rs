//! Seeded sampling of the discrete-time stochastic system.
//!
//! Standard normals come from the polar Box-Muller transform fed by
//! ChaCha8 uniforms (`ChaCha8Rng::seed_from_u64(seed)`, 53-bit floats in
//! [0, 1)). A correlated draw is `F z` with `F` the lower factor from
//! [`cholesky_psd`] and `z` consecutive standard normals. All sums run in
//! index order, so outputs are bit-reproducible for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_psd, JitterPolicy, Matrix};
use crate::model::DiscreteLtiSystem;

/// Deterministic standard-normal stream.
#[derive(Debug, Clone)]
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    pub fn next_standard(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.rng.random::<f64>() - 1.0;
            let v = 2.0 * self.rng.random::<f64>() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let f = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * f);
                return u * f;
            }
        }
    }

    fn correlated(&mut self, factor: &Matrix) -> Vec<f64> {
        let z: Vec<f64> = (0..factor.cols()).map(|_| self.next_standard()).collect();
        factor.mul_vec(&z)
    }
}

/// `count` draws from `N(0, cov)`.
pub fn sample_noise(cov: &Matrix, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let factor = cholesky_psd(cov, &JitterPolicy::default())?.lower;
    let mut source = GaussianSource::new(seed);
    Ok((0..count).map(|_| source.correlated(&factor)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCovarianceEstimate {
    /// Unbiased sample covariance, normalized by `count - 1`.
    pub covariance: Matrix,
    /// `max |S - cov| / ||cov||_inf` (absolute when `cov` is zero).
    pub max_relative_deviation: f64,
}

pub fn empirical_noise_covariance(cov: &Matrix, count: usize, seed: u64) -> Result<NoiseCovarianceEstimate> {
    if count < 2 {
        return Err(Error::TooFewSamples(count));
    }
    let samples = sample_noise(cov, count, seed)?;
    let covariance = sample_covariance(&samples, cov.rows());
    let norm = cov.norm_inf();
    let dev = covariance.max_abs_diff(cov)?;
    Ok(NoiseCovarianceEstimate {
        covariance,
        max_relative_deviation: if norm > 0.0 { dev / norm } else { dev },
    })
}

fn sample_covariance(samples: &[Vec<f64>], dim: usize) -> Matrix {
    let count = samples.len() as f64;
    let mut mean = vec![0.0; dim];
    for s in samples {
        for (m, x) in mean.iter_mut().zip(s) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= count);

    let mut acc = Matrix::zeros(dim, dim);
    for s in samples {
        for i in 0..dim {
            let di = s[i] - mean[i];
            for j in i..dim {
                acc.set(i, j, acc.get(i, j) + di * (s[j] - mean[j]));
            }
        }
    }
    Matrix::from_fn(dim, dim, |i, j| {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        acc.get(i, j) / (count - 1.0)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    /// `x_0 .. x_K`.
    pub states: Vec<Vec<f64>>,
    /// `y_1 .. y_K`, one per propagated state.
    pub outputs: Vec<Vec<f64>>,
    /// `None` for a noise-free run.
    pub seed: Option<u64>,
    pub dt: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }
}

/// Runs `x_k = Ad x_{k-1} + Bd u_{k-1} + w_{k-1}`, `y_k = Cd x_k + Md v_k`
/// for `k = 1..=inputs.len()`.
///
/// With a seed, each step draws `w` then `v` from one stream; without one
/// both noises are zero.
pub fn simulate(dsys: &DiscreteLtiSystem, x0: &[f64], inputs: &[Vec<f64>], seed: Option<u64>) -> Result<Trajectory> {
    let n = dsys.state_dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            op: "simulate",
            left_name: "x0",
            left: (x0.len(), 1),
            right_name: "Ad",
            right: dsys.ad.shape(),
        });
    }
    if let Some(bad) = inputs.iter().find(|u| u.len() != dsys.input_dim()) {
        return Err(Error::DimensionMismatch {
            op: "simulate",
            left_name: "input",
            left: (bad.len(), 1),
            right_name: "Bd",
            right: dsys.bd.shape(),
        });
    }
    if !x0.iter().chain(inputs.iter().flatten()).all(|v| v.is_finite()) {
        return Err(Error::InvalidOption("x0 and inputs must be finite".into()));
    }

    let mut noise = match seed {
        Some(seed) => {
            let w = cholesky_psd(&dsys.qd, &JitterPolicy::default())?.lower;
            let v = cholesky_psd(&dsys.rd, &JitterPolicy::default())?.lower;
            Some((GaussianSource::new(seed), w, v))
        }
        None => None,
    };

    let mut states = Vec::with_capacity(inputs.len() + 1);
    let mut outputs = Vec::with_capacity(inputs.len());
    let mut x = x0.to_vec();
    states.push(x.clone());
    for u in inputs {
        let mut next = dsys.ad.mul_vec(&x);
        add_assign(&mut next, &dsys.bd.mul_vec(u));
        let mut y_noise = None;
        if let Some((source, w_factor, v_factor)) = noise.as_mut() {
            add_assign(&mut next, &source.correlated(w_factor));
            y_noise = Some(source.correlated(v_factor));
        }
        let mut y = dsys.cd.mul_vec(&next);
        if let Some(v) = y_noise {
            add_assign(&mut y, &dsys.md.mul_vec(&v));
        }
        x = next;
        states.push(x.clone());
        outputs.push(y);
    }
    Ok(Trajectory {
        states,
        outputs,
        seed,
        dt: dsys.dt,
    })
}

fn add_assign(x: &mut [f64], y: &[f64]) {
    for (a, b) in x.iter_mut().zip(y) {
        *a += b;
    }
}
