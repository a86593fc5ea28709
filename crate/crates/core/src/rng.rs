//! Portable deterministic random stream.
//!
//! Every random quantity in the crate is drawn from SplitMix64 so that a
//! `(seed, stream)` pair regenerates the same values on any platform and in
//! any language that follows the same recipe:
//!
//! * uniforms are the top 53 bits of a draw scaled by 2^-53, in `[0, 1)`;
//! * normals come from Box–Muller on consecutive uniform pairs
//!   `(u1, u2)`, using `1 - u1` so the logarithm never sees zero, and both
//!   outputs of a pair are consumed (cosine branch first);
//! * signs come from the top bit of a draw (set bit means negative);
//! * bounded integers are `draw % bound`.

use std::f64::consts::PI;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream id for measurement matrices.
pub const STREAM_MATRIX: u64 = 0;
/// Stream id for synthetic-signal noise.
pub const STREAM_NOISE: u64 = 1;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare_normal: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare_normal: None,
        }
    }

    /// Generator for an independent stream derived from `seed`. Stream 0 is
    /// the plain seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Self::new(seed ^ stream.wrapping_mul(GOLDEN_GAMMA).rotate_left(17))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * PI * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// `+1.0` or `-1.0` from the top bit of one draw.
    pub fn next_sign(&mut self) -> f64 {
        if self.next_u64() >> 63 == 1 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    /// First `m` entries of a Fisher–Yates shuffle of `0..n`, in draw order.
    pub fn partial_shuffle(&mut self, n: usize, m: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..m.min(n) {
            let j = i + self.next_below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(m.min(n));
        pool
    }
}
