//! Seed expansion.
//!
//! A single root seed drives every random draw in a run. Each pipeline stage
//! gets its own ChaCha stream selected by a fixed stage id, so inserting a new
//! stage never shifts the draws of an existing one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Identifies a consumer of randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stage {
    Synthetic = 1,
    Oversample = 2,
    Split = 3,
    SvmSolver = 4,
    KernelShots = 5,
    QnnInit = 6,
    QnnOptimizer = 7,
}

/// RNG for `stage` under `root`.
pub fn stage_rng(root: u64, stage: Stage) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(root);
    rng.set_stream(stage as u64);
    rng
}

/// Derived 64-bit seed for `stage` under `root`.
pub fn stage_seed(root: u64, stage: Stage) -> u64 {
    splitmix64(root ^ splitmix64(stage as u64))
}

/// Seed for the `(i, j)` entry of a pairwise computation.
pub fn pair_seed(root: u64, i: usize, j: usize) -> u64 {
    let a = splitmix64(root);
    let b = splitmix64(a ^ (i as u64));
    splitmix64(b ^ (j as u64).rotate_left(32))
}

#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
