//! Reproducible random streams.
//!
//! A stream is a pure function of `(master_seed, stream_index)`: the master
//! seed keys a ChaCha8 generator and the index selects one of its 2^64
//! independent streams. Results never depend on which thread owns a stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Independent index ranges for the different consumers of randomness.
///
/// The namespace occupies the top byte of the stream index, the replication
/// index the remaining 56 bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum StreamNamespace {
    AdaptivePath = 1,
    AdaptiveMinimum = 2,
    EquidistantPath = 3,
    EquidistantMinimum = 4,
}

impl StreamNamespace {
    pub fn stream_index(self, replication: u64) -> u64 {
        assert!(replication < 1 << 56, "replication index too large");
        ((self as u64) << 56) | replication
    }
}

#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn for_replication(master_seed: u64, namespace: StreamNamespace, replication: u64) -> Self {
        Self::new(master_seed, namespace.stream_index(replication))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Standard normal variate.
    pub fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform variate in `(0, 1]`.
    pub fn uniform_open_closed(&mut self) -> f64 {
        1.0 - self.rng.gen::<f64>()
    }
}
