//! Seeded deterministic random source.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::C64;

/// ChaCha8 stream with a few sampling helpers.
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `[0, 1)` with 53 bits.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Integer in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.0.next_u64() % span) as i64
    }

    /// Point in the annulus `r0 <= |z| <= r1`, uniform in area.
    pub fn annulus(&mut self, r0: f64, r1: f64) -> C64 {
        let t = self.unit();
        let r = libm::sqrt(r0 * r0 + t * (r1 * r1 - r0 * r0));
        let th = self.uniform(0.0, 2.0 * crate::PI);
        C64::new(r * libm::cos(th), r * libm::sin(th))
    }
}
