//! Fair-coin samplers: the binary-bias loop on exact rationals and the
//! general discrete sampler over a cumulative weight list, plus a seeded
//! Monte-Carlo harness and goodness-of-fit statistics.

mod bits;
mod dist;
mod run;
pub mod stats;
mod trials;

use thiserror::Error;

pub use bits::{BitSource, ScriptedBits, SeededBits};
pub use dist::{CumulativeDist, WeightedDist, MAX_TOTAL};
pub use run::{sample_binary, sample_discrete, SampleTrace};
pub use trials::{run_binary_trials, run_trials, TrialReport, SHARDS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplerError {
    #[error("a distribution needs at least one weight")]
    EmptyDistribution,
    #[error("weight {index} is zero; every weight must be at least 1")]
    ZeroWeight { index: usize },
    #[error("total weight exceeds {0}")]
    TotalTooLarge(u64),
    #[error("bit source exhausted after {consumed} bits")]
    BitsExhausted { consumed: usize },
    #[error("bit {0} is neither 0 nor 1")]
    BadBit(u8),
    #[error("split of a terminated configuration (low = high = {0})")]
    Terminated(usize),
    #[error("window invariant violated: {0}")]
    InvariantBreach(String),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("distribution file: {0}")]
    Format(String),
}
