//! Seeded, splittable random streams.
//!
//! A stream is addressed by `(seed, stream_id)`. The same pair always yields the
//! same draw sequence, and children derived with [`RngStream::child`] are
//! independent of how many siblings exist, so adding trees or runs never
//! perturbs earlier ones.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator type used throughout the crate.
pub type SimRng = ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    pub fn from_seed(seed: u64) -> Self {
        Self::new(seed, 0)
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> SimRng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        rng
    }

    /// Derived stream `id` under this one.
    pub fn child(&self, id: u64) -> RngStream {
        RngStream { seed: splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x5EED))), stream_id: id }
    }

    /// Derived stream keyed by a label, for named draws such as `"mu"` or `"test"`.
    pub fn named(&self, label: &str) -> RngStream {
        let h = label.bytes().fold(0xCBF2_9CE4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01B3));
        self.child(h)
    }
}
