//! Shared inputs for the benchmarks.

use entropic::systems::System;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `count` seeded admissible state pairs of `sys`.
pub fn state_pairs<const N: usize, S: System<N>>(sys: &S, count: usize, seed: u64) -> Vec<([f64; N], [f64; N])> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| (sys.sample_state(&mut rng), sys.sample_state(&mut rng))).collect()
}
