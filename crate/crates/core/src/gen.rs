//! Seeded request generators shared by the CLI, the tests and the demo.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf2::RequestBatch;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of run `r` derived from a run-level seed.
pub fn run_seed(seed: u64, r: u64) -> u64 {
    seed ^ r.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// `k` uniform nonzero vectors.
pub fn random_batch(s: u32, k: usize, rng: &mut impl Rng) -> RequestBatch {
    let reqs = (0..k)
        .map(|_| rng.gen_range(1..=crate::gf2::mask(s)))
        .collect();
    RequestBatch::from_raw(s, reqs).expect("nonzero by construction")
}

/// `k` standard basis vectors.
pub fn random_unit_batch(s: u32, k: usize, rng: &mut impl Rng) -> RequestBatch {
    let reqs = (0..k).map(|_| 1u32 << rng.gen_range(0..s)).collect();
    RequestBatch::from_raw(s, reqs).expect("nonzero by construction")
}

/// `k` vectors of odd Hamming weight.
pub fn random_odd_batch(s: u32, k: usize, rng: &mut impl Rng) -> RequestBatch {
    let odd: Vec<u32> = (1..=crate::gf2::mask(s))
        .filter(|v| v.count_ones() % 2 == 1)
        .collect();
    let reqs = (0..k).map(|_| *odd.choose(rng).expect("s >= 1")).collect();
    RequestBatch::from_raw(s, reqs).expect("nonzero by construction")
}
