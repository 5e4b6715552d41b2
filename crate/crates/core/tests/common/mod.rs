#![allow(dead_code)]

use ceig::rng::{self, Gaussian};
use ceig::{PiezoTensor, SymmetryMode};

/// Tensor with entries uniform on `[-scale, scale)`, symmetrized over `(j, k)`.
pub fn random_tensor(n: usize, scale: f64, seed: u64) -> PiezoTensor {
    let mut s = rng::stream(seed);
    let raw: Vec<f64> = (0..n * n * n)
        .map(|_| scale * (2.0 * rng::uniform(&mut s) - 1.0))
        .collect();
    PiezoTensor::new(n, &raw, SymmetryMode::AutoSymmetrize).unwrap()
}

pub fn unit_vectors(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut g = Gaussian::new(seed);
    (0..count).map(|_| g.unit_vector(n)).collect()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}
