//! Binary symmetric channel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVector;

/// Name of the generator behind every seeded stream in this crate.
pub const RNG_ALGORITHM: &str = "ChaCha8";

/// Seeded stream for task `index` under `master_seed`. Streams for distinct
/// indices are independent, so results do not depend on scheduling.
pub fn task_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// A BSC with crossover probability `epsilon` and its own random stream.
#[derive(Debug, Clone)]
pub struct BscChannel<R = ChaCha8Rng> {
    epsilon: f64,
    rng: R,
}

impl BscChannel<ChaCha8Rng> {
    pub fn seeded(epsilon: f64, seed: u64) -> Result<Self> {
        Self::with_rng(epsilon, ChaCha8Rng::seed_from_u64(seed))
    }
}

impl<R: Rng> BscChannel<R> {
    /// Rejects `epsilon` outside `[0, 0.5]`.
    pub fn with_rng(epsilon: f64, rng: R) -> Result<Self> {
        if !(0.0..=0.5).contains(&epsilon) {
            return Err(Error::InvalidInput(format!(
                "crossover probability {epsilon} outside [0, 0.5]"
            )));
        }
        Ok(Self { epsilon, rng })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Noise pattern `w` of length `n`; equals the received word when the
    /// all-zero codeword is sent.
    pub fn error_pattern(&mut self, n: usize) -> BitVector {
        let mut w = BitVector::zeros(n);
        for i in 0..n {
            if self.rng.gen_bool(self.epsilon) {
                w.set(i, true);
            }
        }
        w
    }

    /// `y = x + w`.
    pub fn transmit(&mut self, x: &BitVector) -> BitVector {
        let w = self.error_pattern(x.len());
        x.xor(&w).expect("same length")
    }
}
