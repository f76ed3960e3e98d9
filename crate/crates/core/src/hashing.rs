//! Multiply-add-shift universal hashing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `h(x) = ((a·x + b) mod 2^128) >> (128 - bits)` for 64-bit keys.
///
/// With 128-bit `a`, `b` this family is universal onto `[0, 2^bits)` for
/// any `bits <= 63`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplyAddShift {
    a: u128,
    b: u128,
    bits: u32,
}

impl MultiplyAddShift {
    pub fn new(a: u128, b: u128, bits: u32) -> Self {
        assert!((1..=63).contains(&bits), "range must be 2^1 ..= 2^63");
        MultiplyAddShift { a, b, bits }
    }

    pub fn random(rng: &mut impl Rng, bits: u32) -> Self {
        Self::new(rng.random(), rng.random(), bits)
    }

    pub fn range(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn hash(&self, x: u64) -> u64 {
        (self.a.wrapping_mul(x as u128).wrapping_add(self.b) >> (128 - self.bits)) as u64
    }
}

/// `count` independent functions onto `[0, 2^bits)`, all derived from `seed`.
pub fn hash_family(seed: u64, count: usize, bits: u32) -> Vec<MultiplyAddShift> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| MultiplyAddShift::random(&mut rng, bits))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_stay_in_range() {
        for h in hash_family(1, 8, 5) {
            for x in 0..1000 {
                assert!(h.hash(x) < 32);
            }
        }
    }

    #[test]
    fn family_is_seed_stable() {
        assert_eq!(hash_family(7, 3, 10), hash_family(7, 3, 10));
        assert_ne!(hash_family(7, 3, 10), hash_family(8, 3, 10));
    }

    #[test]
    fn collision_rate_is_near_uniform() {
        // Over random functions, a fixed pair collides with probability about 2^-bits.
        let bits = 4;
        let trials = 4000;
        let collisions = hash_family(3, trials, bits)
            .iter()
            .filter(|h| h.hash(17) == h.hash(901))
            .count();
        let expected = trials as f64 / 16.0;
        assert!((collisions as f64) < 2.0 * expected, "{collisions}");
    }
}
