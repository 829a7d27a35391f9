//! Seeded, platform-independent randomness.
//!
//! Every random decision in the crate goes through [`RandomSource`], a thin
//! wrapper around ChaCha8 whose output depends only on the seed and stream.

use rand::{Error, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifies the draw that produced a stimulus: the seed and stream of the
/// source plus the number of stimuli drawn from it before.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DrawTag {
    pub seed: u64,
    pub stream: u64,
    pub index: u64,
}

#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    draws: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource::with_stream(seed, 0)
    }

    /// An independent stream under the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource {
            seed,
            stream,
            draws: 0,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Tag for the next stimulus; advances the draw counter.
    pub fn next_tag(&mut self) -> DrawTag {
        let tag = DrawTag {
            seed: self.seed,
            stream: self.stream,
            index: self.draws,
        };
        self.draws += 1;
        tag
    }
}

impl RngCore for RandomSource {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), Error> {
        self.rng.try_fill_bytes(dest)
    }
}

/// Mixes a master seed with a path of indices into a child seed (SplitMix64
/// finalizer per step), so nested loops get independent, order-free seeds.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter().fold(master, |acc, &x| {
        let mut z = acc
            ^ x.wrapping_add(0x9E37_79B9_7F4A_7C15)
                .wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    })
}
