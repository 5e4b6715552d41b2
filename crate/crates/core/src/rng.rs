//! Seeded random streams.
//!
//! All randomness flows from [`SplitMix64`] (`rand_xoshiro`), whose output
//! sequence is fixed by its published algorithm. Uniform doubles take the top
//! 53 bits of each output word (`rand`'s `StandardUniform` for `f64`);
//! Gaussians use the basic Box–Muller transform below. Together these
//! make every start vector and perturbation reproducible from a `u64` seed.

use rand::{RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;

pub use rand_xoshiro::SplitMix64 as Stream;

pub fn stream(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// Uniform on `[0, 1)`.
pub fn uniform(rng: &mut SplitMix64) -> f64 {
    rng.random::<f64>()
}

/// Standard normal pairs via Box–Muller. The second value of each pair is
/// kept for the next call.
#[derive(Debug, Clone)]
pub struct Gaussian {
    rng: SplitMix64,
    spare: Option<f64>,
}

impl Gaussian {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: stream(seed),
            spare: None,
        }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        // 1 - u lies in (0, 1], keeping ln finite.
        let u1 = 1.0 - uniform(&mut self.rng);
        let u2 = uniform(&mut self.rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// A uniformly distributed point on the unit sphere in `R^n`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| self.sample()).collect();
            if crate::linalg::normalize(&mut v) > 1e-12 {
                return v;
            }
        }
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Folds `parts` into `seed`, one mixing round per part.
pub fn derive_seed(seed: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(seed), |h, &p| {
        mix64(h ^ p.wrapping_add(0x9e37_79b9_7f4a_7c15))
    })
}

/// 64-bit FNV-1a, used to key per-material streams by name.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}
