//! Seeded random source shared by every stochastic operation.
//!
//! All randomness flows through [`RandomSource`], a thin wrapper around
//! ChaCha8. Replication streams are derived from a master seed with
//! [`replication_seed`], so a replication's stream depends only on its
//! coordinates and never on scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator of uniform and standard-normal reals.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Seed this source was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Stream for replication `replication` of algorithm `algorithm` under `master_seed`.
    pub fn for_replication(master_seed: u64, algorithm: u64, replication: u64) -> Self {
        Self::from_seed(replication_seed(master_seed, algorithm, replication))
    }

    /// Uniform draw in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw in `(0, 1)`; exact zeros are redrawn.
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = self.uniform();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one replication stream.
///
/// `splitmix64(splitmix64(master ^ splitmix64(algorithm)) ^ replication)`.
pub fn replication_seed(master_seed: u64, algorithm: u64, replication: u64) -> u64 {
    splitmix64(splitmix64(master_seed ^ splitmix64(algorithm)) ^ replication)
}
