//! Exact uniform sampling of list colourings, single-pass resampling, and the
//! mark / uncolour / recolour experiment around a vertex.
//!
//! Every random choice is made by self-reducibility: a vertex takes colour
//! `x` with probability `ext(c + {v -> x}) / ext(c)`, with extension counts
//! from [`crate::counting`]. The same step distributions drive the exact
//! distribution propagation in [`exact`], so the exactness tests exercise the
//! sampling code itself.

mod diagnostics;
pub mod exact;
mod experiment;
mod resample;
mod uniform;

pub use diagnostics::{
    exact_diagnostics, experiment_diagnostics, Diagnostics, Estimate, ExactDiagnostics,
};
pub use experiment::{
    four_step_experiment, four_step_experiment_with, ExperimentSetup, ExperimentTrace,
};
pub use resample::{
    avoidance_probability_bound, avoidance_probability_bound_exact, exact_avoidance_probability,
    resample_once,
};
pub use uniform::{
    sample_extension, sample_uniform, sample_uniform_with, step_distribution, SampledColouring,
};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::counting::CountError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SampleError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("no proper colouring exists (count {count})")]
    Uncolourable { count: BigUint },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {what} (limit {limit}); {advice}")]
    Capacity {
        what: &'static str,
        limit: u64,
        advice: &'static str,
    },
}

impl SampleError {
    pub fn is_capacity(&self) -> bool {
        match self {
            SampleError::Capacity { .. } => true,
            SampleError::Count(e) => e.is_capacity(),
            _ => false,
        }
    }
}

/// A reproducible stream of randomness: ChaCha8 keyed by `seed`, on stream
/// `stream`. Equal pairs give equal draws on every platform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RandomSource {
    pub seed: u64,
    pub stream: u64,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    /// The same seed on another stream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}
