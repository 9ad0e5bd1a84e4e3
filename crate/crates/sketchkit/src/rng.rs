//! Seed-splitting helpers.
//!
//! All randomness in the crate flows through named, splittable seed streams:
//! one stream per column / row / block, derived from a root seed by mixing
//! with a purpose salt and an index. Output therefore never depends on
//! evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// splitmix64 finalizer; good avalanche, cheap enough to call per element.
#[inline]
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Derive a child seed from a root seed, a purpose salt, and an index.
#[inline]
pub fn child_seed(seed: u64, salt: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ salt).wrapping_add(index))
}

/// A seeded stream RNG for a named sub-object (column, block, trial, ...).
#[inline]
pub fn stream_rng(seed: u64, salt: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(child_seed(seed, salt, index))
}

/// Uniform value in `[0, m)` derived purely from `(seed, salt, index)`.
#[inline]
pub fn hash_mod(seed: u64, salt: u64, index: u64, m: usize) -> usize {
    debug_assert!(m > 0);
    (child_seed(seed, salt, index) % m as u64) as usize
}

/// A deterministic sign in `{-1.0, +1.0}` from `(seed, salt, index)`.
#[inline]
pub fn hash_sign(seed: u64, salt: u64, index: u64) -> f64 {
    if child_seed(seed, salt, index) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Uniform f64 in [0,1) from `(seed, salt, index)`.
#[inline]
pub fn hash_unit(seed: u64, salt: u64, index: u64) -> f64 {
    (child_seed(seed, salt, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

// Purpose salts. Distinct constants so streams for different purposes
// never collide even under equal indices.
pub mod salt {
    pub const COUNT_SKETCH: u64 = 0x9d0c_55b1;
    pub const OSNAP: u64 = 0x51a7_e3fd;
    pub const GAUSSIAN_COL: u64 = 0xc2b8_9ef1;
    pub const SPARSE_SIGN_COL: u64 = 0x7e11_3a6b;
    pub const RANK_PRESERVE: u64 = 0x1f83_d9ab;
    pub const FLATTEN_GRAPH: u64 = 0x36e4_b2c7;
    pub const FLATTEN_SIGNS: u64 = 0x8a5d_01f3;
    pub const BERNOULLI_ROW: u64 = 0x44d1_f0e9;
    pub const CALIBRATION: u64 = 0x6c9a_27dd;
    pub const PROBE: u64 = 0x2d41_88c5;
    pub const STAGE: u64 = 0xe703_5a19;
    pub const SAMPLE: u64 = 0xba17_6cd3;
    pub const SYNTH: u64 = 0x05f9_e147;
}

/// Gaussian variate stream from a child seed. Uses ChaCha so values are
/// identical across platforms.
pub fn gaussian_column(seed: u64, salt: u64, index: u64, len: usize) -> Vec<f64> {
    use rand_distr::{Distribution, StandardNormal};
    let mut rng = stream_rng(seed, salt, index);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}
