//! Counter-based uniform streams keyed by `(seed, stream, sample)`.
//!
//! Each stream is a ChaCha8 keystream selected by its 64-bit stream id; a
//! sample consumes exactly two 64-bit words, so sample `i` of any stream can
//! be reached directly without generating its predecessors.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// 32-bit keystream words consumed per sample (two `u64` draws).
const WORDS_PER_SAMPLE: u128 = 4;

#[derive(Debug, Clone)]
pub struct SampleStream {
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Stream positioned at `sample`.
    pub fn at(seed: u64, stream: u64, sample: u64) -> Self {
        let mut s = Self::new(seed, stream);
        s.rng.set_word_pos(sample as u128 * WORDS_PER_SAMPLE);
        s
    }

    /// Uniform on `[0, 1)` from the top 53 bits of one word.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// The two uniforms of one sample.
    #[inline]
    pub fn next_pair(&mut self) -> (f64, f64) {
        let a = self.next_unit();
        let b = self.next_unit();
        (a, b)
    }
}
