//! Counter-based noise.
//!
//! Coalescing lattice walks are driven by a noise field indexed by
//! space-time sites: every walker standing on site `x` at time `t` consumes
//! the same variable. A sequential generator cannot serve random access like
//! that, so the field is a keyed hash of `(site, time)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const ODD_B: u64 = 0xD1B5_4A32_D192_ED03;

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replica `index` of an experiment seeded with `seed`.
pub fn replica_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Independent sub-seed for a named purpose inside one replica.
pub fn sub_seed(seed: u64, stream: u64) -> u64 {
    mix64(mix64(seed).wrapping_add(stream.wrapping_mul(ODD_B)) ^ GOLDEN)
}

/// Sequential generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform in `[0, 1)` from the top 53 bits of a word.
#[inline]
pub fn unit_f64(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform index in `0..n` from a word (multiply-shift).
#[inline]
pub fn index_below(word: u64, n: usize) -> usize {
    (((word >> 32) * n as u64) >> 32) as usize
}

/// A keyed field of independent 64-bit words over `(site, time)` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NoiseField {
    key: u64,
}

impl NoiseField {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { key: sub_seed(seed, stream) }
    }

    #[inline]
    pub fn word(&self, site: i64, time: i64) -> u64 {
        let a = mix64(self.key.wrapping_add((site as u64).wrapping_mul(GOLDEN)));
        mix64(a.wrapping_add((time as u64).wrapping_mul(ODD_B)))
    }

    /// Word for a triple, used for pairwise coins `(j, i, step)`.
    #[inline]
    pub fn word3(&self, a: u64, b: u64, c: i64) -> u64 {
        let h = mix64(self.key ^ a.wrapping_mul(GOLDEN));
        self.word(h as i64 ^ b as i64, c)
    }

    #[inline]
    pub fn unit(&self, site: i64, time: i64) -> f64 {
        unit_f64(self.word(site, time))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_is_deterministic_and_keyed() {
        let a = NoiseField::new(7, 0);
        let b = NoiseField::new(7, 0);
        let c = NoiseField::new(7, 1);
        assert_eq!(a.word(3, 9), b.word(3, 9));
        assert_ne!(a.word(3, 9), c.word(3, 9));
        assert_ne!(a.word(3, 9), a.word(9, 3));
    }

    #[test]
    fn unit_values_look_uniform() {
        let f = NoiseField::new(42, 3);
        let n = 200_000;
        let mut bins = [0usize; 10];
        let mut sum = 0.0;
        for k in 0..n {
            let u = f.unit(k as i64 % 501 - 250, k as i64 / 501);
            assert!((0.0..1.0).contains(&u));
            bins[(u * 10.0) as usize] += 1;
            sum += u;
        }
        let mean = sum / n as f64;
        assert!((mean - 0.5).abs() < 3.0 * (1.0 / 12.0f64 / n as f64).sqrt() * 1.5);
        let expect = n as f64 / 10.0;
        let chi2: f64 = bins.iter().map(|&b| (b as f64 - expect).powi(2) / expect).sum();
        // 9 degrees of freedom, 0.999 quantile is about 27.9
        assert!(chi2 < 27.9, "chi2 = {chi2}");
    }

    #[test]
    fn index_below_covers_range() {
        let f = NoiseField::new(1, 1);
        let mut seen = [0usize; 3];
        for t in 0..30_000 {
            seen[index_below(f.word(0, t), 3)] += 1;
        }
        for s in seen {
            assert!((s as f64 - 10_000.0).abs() < 400.0);
        }
    }
}
