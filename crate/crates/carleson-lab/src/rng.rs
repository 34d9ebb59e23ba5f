//! Counter-based deterministic random numbers.
//!
//! The generator is SplitMix64 run in counter mode: output `i` of the
//! stream with seed `s` is `mix64(s +wrap (i+1) *wrap 0x9E3779B97F4A7C15)`,
//! where `mix64` is the Stafford variant-13 finalizer. The whole state is
//! the pair (seed, counter), so streams are reproducible bit-exactly from
//! this description in any language, and substreams can be split off by
//! hashing a label into a new seed.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splittable counter-mode SplitMix64 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    /// Derive an independent stream for a labelled subtask. Labels are
    /// folded bytewise into the seed so the mapping is language-neutral.
    pub fn split(&self, label: &str) -> Self {
        let mut h = self.seed ^ 0xA076_1D64_78BD_642F;
        for &b in label.as_bytes() {
            h = mix64(h ^ u64::from(b)).wrapping_mul(GOLDEN);
        }
        CounterRng::new(mix64(h))
    }

    /// Stream for the `i`-th instance of a sweep.
    pub fn split_index(&self, i: u64) -> Self {
        CounterRng::new(mix64(self.seed ^ mix64(i.wrapping_mul(GOLDEN) ^ 0x1F83_D9AB_FB41_BD6B)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64()
    }

    /// Uniform index in 0..n (n > 0), via the widening-multiply reduction.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        ((u128::from(self.next_u64()) * n as u128) >> 64) as usize
    }

    /// Uniform integer in lo..=hi.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.index((hi - lo + 1) as usize) as i64
    }

    /// Random sign.
    pub fn sign(&mut self) -> f64 {
        if self.next_u64() & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
}
