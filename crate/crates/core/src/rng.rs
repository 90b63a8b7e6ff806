//! Seed derivation and hash-based Bernoulli membership.
//!
//! Every random choice in the crate flows from one master seed. Child seeds are
//! derived from `(seed, label, index)` with a counter-based mixer, so adding a
//! trial or a plan entry never shifts the randomness of another one.
//!
//! Subsampled query sides are never materialised. Membership of item `u` in a
//! subsample keyed by `key` at rate `p` is `mix(key, u) < p * 2^64`, which makes
//! the items independent Bernoulli(p) draws for any fixed key.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a, then mixed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    mix64(h)
}

/// Child seed for component `label`, instance `index`.
pub fn derive(seed: u64, label: &str, index: u64) -> u64 {
    mix64(mix64(seed ^ label_hash(label)).wrapping_add(index.wrapping_mul(GOLDEN)))
}

/// Child key from a numeric path, used for per-query subsample keys.
#[inline]
pub fn child(key: u64, index: u64) -> u64 {
    mix64(key ^ mix64(index.wrapping_add(0x632B_E59B_D9B4_E019)))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fixed-point threshold for rate `p`; `None` means "keep everything".
#[inline]
pub fn threshold(rate: f64) -> Option<u64> {
    if rate >= 1.0 {
        None
    } else if rate <= 0.0 {
        Some(0)
    } else {
        Some((rate * 18_446_744_073_709_551_616.0) as u64)
    }
}

/// Hash-based Bernoulli(rate) membership of `item` under `key`.
#[inline]
pub fn keep(key: u64, item: u64, rate: f64) -> bool {
    match threshold(rate) {
        None => true,
        Some(t) => keep_below(key, item, t),
    }
}

#[inline]
pub fn keep_below(key: u64, item: u64, threshold: u64) -> bool {
    mix64(key ^ mix64(item)) < threshold
}

/// A uniform float in `[0, 1)` from a hash, 53 bits of precision.
#[inline]
pub fn unit(key: u64, item: u64) -> f64 {
    (mix64(key ^ mix64(item)) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derive_separates_labels_and_indices() {
        let a = derive(7, "trial", 0);
        assert_ne!(a, derive(7, "trial", 1));
        assert_ne!(a, derive(7, "other", 0));
        assert_ne!(a, derive(8, "trial", 0));
        assert_eq!(a, derive(7, "trial", 0));
    }

    #[test]
    fn keep_rate_extremes() {
        for u in 0..1000 {
            assert!(keep(3, u, 1.0));
            assert!(!keep(3, u, 0.0));
        }
    }

    #[test]
    fn keep_rate_is_calibrated() {
        let n = 200_000u64;
        for &p in &[0.5, 0.125, 0.01] {
            let hits = (0..n).filter(|&u| keep(99, u, p)).count() as f64;
            let sd = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((hits - n as f64 * p).abs() < 4.0 * sd, "p={p} hits={hits}");
        }
    }

    #[test]
    fn keys_are_independent_enough() {
        // Pairs of keys at rate 1/2 should agree about half the time.
        let n = 100_000u64;
        let agree = (0..n).filter(|&u| keep(child(1, 0), u, 0.5) == keep(child(1, 1), u, 0.5)).count();
        let frac = agree as f64 / n as f64;
        assert!((frac - 0.5).abs() < 0.01, "{frac}");
    }

    #[test]
    fn unit_in_range() {
        for u in 0..10_000 {
            let x = unit(5, u);
            assert!((0.0..1.0).contains(&x));
        }
    }
}
