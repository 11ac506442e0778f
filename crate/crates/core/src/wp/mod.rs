//! Weakest pre-expectations over finite state spaces, and the checks built
//! on them: equivalence, refinement, resolution enumeration and the
//! probabilistic variant rule.

mod check;
mod engine;
mod expectation;
mod probe;
mod resolve;
mod variant;

use thiserror::Error;

use crate::lang::EvalError;
use crate::rational::{pow2_neg, Rational};

pub use check::{check_equal, check_equal_on, check_refines, check_refines_on, sweep, Counterexample, Status, Verdict};
pub use engine::{wp, WpEngine, WpResult};
pub use expectation::Expectation;
pub use probe::{Probe, ProbeFamily, RANDOM_PROBES};
pub use resolve::{enumerate_resolutions, enumerate_resolutions_bounded, Dist, Resolutions, StateResolutions, RESOLUTION_BOUND};
pub use variant::{check_variant, check_variant_from};

/// Iteration budget and stopping tolerance for loop fixpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfig {
    pub max_iters: usize,
    pub tolerance: Rational,
}

impl Default for LoopConfig {
    fn default() -> Self {
        Self { max_iters: 100_000, tolerance: pow2_neg(40) }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WpError {
    #[error("at state ({state}): {source}")]
    Eval { state: String, source: EvalError },
    #[error("at state ({state}): probability {value} is outside [0, 1]")]
    ProbabilityOutOfRange { state: String, value: String },
    #[error("at state ({state}): value {value} is outside the domain of `{var}`")]
    OutOfDomain { state: String, var: String, value: String },
    #[error("at state ({state}): distribution weights sum to {sum}, not 1")]
    DistributionSum { state: String, sum: String },
    #[error("at state ({state}): expectation value {value} is negative")]
    NegativeExpectation { state: String, value: String },
    #[error("expectation has {got} entries but the space has {expected} states")]
    WrongLength { expected: usize, got: usize },
    #[error("loop iterates decreased at state ({state}) on iteration {iteration}")]
    ChainDescent { state: String, iteration: usize },
    #[error("loop did not converge within {iterations} iterations (last change {change})")]
    Inconclusive { iterations: usize, change: String },
    #[error("program contains a loop")]
    NotLoopFree,
    #[error("more than {0} resolutions of demonic choice")]
    ResolutionBound(usize),
    #[error("not a WHILE loop with a boolean guard")]
    NotALoop,
    #[error("at state ({state}): variant value {value} is not a natural number")]
    VariantNotNatural { state: String, value: String },
}
