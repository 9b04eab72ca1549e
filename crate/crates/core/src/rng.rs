//! Reproducible randomness.
//!
//! Every random draw goes through a [`RngHandle`], a ChaCha8 generator keyed
//! by a 64-bit seed and a 64-bit stream id. ChaCha is counter based, so a
//! given `(seed, stream)` pair yields the same sequence on every platform.
//! Sampling only uses `u64` ranges to stay independent of pointer width.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Identifier recorded in reports next to the seed and stream id.
pub const PRNG_ALGORITHM: &str = "chacha8-rand_chacha-0.3";

#[derive(Clone, Debug)]
pub struct RngHandle {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

/// The replay key of a [`RngHandle`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngKey {
    pub seed: u64,
    pub stream: u64,
}

impl RngHandle {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        RngHandle { seed, stream, inner }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn key(&self) -> RngKey {
        RngKey {
            seed: self.seed,
            stream: self.stream,
        }
    }

    /// A fresh handle on a different stream of the same seed.
    pub fn split(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Uniform integer in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        self.inner.gen_range(0..bound as u64) as usize
    }

    /// Uniform real in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform element of `pool`. The pool is not modified.
    pub fn uniform_pick<T: Copy>(&mut self, pool: &[T]) -> Result<T> {
        if pool.is_empty() {
            return Err(Error::EmptyPool);
        }
        Ok(pool[self.below(pool.len())])
    }

    /// Uniform index into a nonempty pool, for callers that remove the pick.
    pub fn pick_index(&mut self, len: usize) -> Result<usize> {
        if len == 0 {
            return Err(Error::EmptyPool);
        }
        Ok(self.below(len))
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}
