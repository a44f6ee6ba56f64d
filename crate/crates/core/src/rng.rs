// Copyright 2026 The tickq Developers
// SPDX-License-Identifier: Apache-2.0

//! Seed schedule for sharded Monte Carlo.
//!
//! Shard `i` of a run seeded with `seed` draws from ChaCha8 stream `i` of
//! that seed, so a result depends on `(seed, shards)` and never on thread
//! scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Distinct reproducible seed for check `tag` of a run seeded with `seed`.
pub fn sub_seed(seed: u64, tag: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag)
}

/// Splits `total` into `shards` near-equal parts, larger parts first.
pub fn shard_sizes(total: usize, shards: usize) -> Vec<usize> {
    let shards = shards.max(1);
    let base = total / shards;
    let extra = total % shards;
    (0..shards).map(|i| base + usize::from(i < extra)).collect()
}

/// Sample mean and standard error of the mean.
pub fn mean_and_standard_error(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sizes_cover_total() {
        assert_eq!(shard_sizes(10, 3), vec![4, 3, 3]);
        assert_eq!(shard_sizes(2, 4), vec![1, 1, 0, 0]);
        assert_eq!(shard_sizes(5, 0), vec![5]);
    }

    #[test]
    fn streams_differ_but_repeat() {
        let a: u64 = shard_rng(1, 0).random();
        let b: u64 = shard_rng(1, 1).random();
        assert_ne!(a, b);
        assert_eq!(a, shard_rng(1, 0).random::<u64>());
    }

    #[test]
    fn standard_error() {
        let (m, se) = mean_and_standard_error(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
