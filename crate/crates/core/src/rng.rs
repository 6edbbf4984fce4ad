//! Seeded randomness shared by every sampler.
//!
//! All randomness flows through [`ChaCha8Rng`] seeded with
//! `seed_from_u64`, whose output stream is fixed by the `rand_chacha`
//! crate and identical across platforms. Index draws go through `u64` so
//! results do not depend on the width of `usize`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..n`. `n` must be positive.
pub fn index(rng: &mut SeededRng, n: usize) -> usize {
    debug_assert!(n > 0);
    rng.random_range(0..n as u64) as usize
}

/// Fisher-Yates permutation of `0..n` driven by `seed`.
pub fn permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeded(seed);
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i as u64) as usize;
        order.swap(i, j);
    }
    order
}

/// Draws an index with probability proportional to `weights[i]`.
///
/// `total` must equal the sum of `weights` and be positive.
pub fn categorical(rng: &mut SeededRng, weights: &[f64], total: f64) -> usize {
    let mut u = rng.random::<f64>() * total;
    for (i, &w) in weights.iter().enumerate() {
        if u < w {
            return i;
        }
        u -= w;
    }
    // Rounding can leave `u` just past the last bucket.
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_is_deterministic_bijection() {
        let a = permutation(50, 7);
        let b = permutation(50, 7);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_ne!(permutation(50, 8), a);
    }

    #[test]
    fn categorical_respects_zero_weights() {
        let mut rng = seeded(1);
        for _ in 0..1000 {
            let k = categorical(&mut rng, &[0.0, 2.0, 0.0, 1.0], 3.0);
            assert!(k == 1 || k == 3);
        }
    }
}
