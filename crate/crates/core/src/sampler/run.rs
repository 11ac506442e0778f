use num_traits::{One, Zero};
use serde::Serialize;

use super::{BitSource, CumulativeDist, SamplerError, WeightedDist};
use crate::rational::{rat, Rational};

/// One completed draw. `outcome` is 1-based for the discrete sampler and
/// the final value of `x` (0 or 1) for the binary one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SampleTrace {
    pub outcome: usize,
    pub flips: u64,
    pub bits: Vec<u8>,
}

/// Draws `x = 1` with probability `p` by repeated halving. At `x = 1/2`
/// the lower branch is taken; bit 0 moves to `q`, bit 1 to `r`.
pub fn sample_binary(p: &Rational, bits: &mut dyn BitSource) -> Result<SampleTrace, SamplerError> {
    if *p < Rational::zero() || *p > Rational::one() {
        return Err(SamplerError::ProbabilityOutOfRange(p.to_string()));
    }
    let half = rat(1, 2);
    let two = Rational::from_integer(2.into());
    let mut x = p.clone();
    let mut trace = Vec::new();
    while x > Rational::zero() && x < Rational::one() {
        let (q, r) = if x <= half { (Rational::zero(), &two * &x) } else { (&two * &x - Rational::one(), Rational::one()) };
        let b = bits.next_bit()?;
        trace.push(b);
        x = if b == 0 { q } else { r };
    }
    Ok(SampleTrace { outcome: usize::from(x.is_one()), flips: trace.len() as u64, bits: trace })
}

/// Draws outcome `i` (1-based) with probability `w_i / total`, checking the
/// window invariant after every flip.
pub fn sample_discrete(d: &WeightedDist, bits: &mut dyn BitSource) -> Result<SampleTrace, SamplerError> {
    let mut c = CumulativeDist::from(d);
    let mut trace = Vec::new();
    while !c.is_terminal() {
        let b = bits.next_bit()?;
        trace.push(b);
        if b == 0 {
            c.step_left()?;
        } else {
            c.step_right()?;
        }
    }
    Ok(SampleTrace { outcome: c.low() + 1, flips: trace.len() as u64, bits: trace })
}
