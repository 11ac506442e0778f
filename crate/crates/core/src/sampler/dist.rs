use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SamplerError;
use crate::rational::Rational;

/// Largest accepted total weight; doubling any cumulative entry stays
/// within `u64`.
pub const MAX_TOTAL: u64 = 1 << 62;

/// Unnormalised positive integer weights `w_1..w_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedDist {
    weights: Vec<u64>,
    total: u64,
}

impl WeightedDist {
    pub fn new(weights: Vec<u64>) -> Result<Self, SamplerError> {
        if weights.is_empty() {
            return Err(SamplerError::EmptyDistribution);
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(SamplerError::ZeroWeight { index });
        }
        let total = weights
            .iter()
            .try_fold(0u64, |acc, &w| acc.checked_add(w))
            .filter(|&t| t <= MAX_TOTAL)
            .ok_or(SamplerError::TotalTooLarge(MAX_TOTAL))?;
        Ok(Self { weights, total })
    }

    /// Scales non-negative rationals (e.g. decimal literals) by the least
    /// common multiple of their denominators; integers pass through as-is.
    pub fn from_rationals(values: &[Rational]) -> Result<Self, SamplerError> {
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(SamplerError::Format(format!("negative weight {v}")));
        }
        let lcm = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scale = Rational::from_integer(lcm);
        let weights = values
            .iter()
            .map(|v| (v * &scale).to_integer().to_u64().ok_or(SamplerError::TotalTooLarge(MAX_TOTAL)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(weights)
    }

    /// Reads the trial file format: a run count on the first line, then
    /// whitespace-separated integer weights to end of input.
    pub fn parse_trials_file(text: &str) -> Result<(u64, Self), SamplerError> {
        let mut lines = text.lines().skip_while(|l| l.trim().is_empty());
        let first = lines.next().ok_or_else(|| SamplerError::Format("missing run count".into()))?;
        let runs: u64 = first
            .trim()
            .parse()
            .map_err(|_| SamplerError::Format(format!("run count `{}` is not an integer", first.trim())))?;
        let weights = lines
            .flat_map(str::split_whitespace)
            .map(|w| w.parse::<u64>().map_err(|_| SamplerError::Format(format!("weight `{w}` is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((runs, Self::new(weights)?))
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `w_i / total` for the 1-based outcome `i`.
    pub fn probability(&self, outcome: usize) -> Rational {
        Rational::new(self.weights[outcome - 1].into(), self.total.into())
    }
}

/// The cumulative list `dL` (length `N-1`) with the active window
/// `[low, high)` over it; the window covers outcomes `low..=high` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CumulativeDist {
    dl: Vec<u64>,
    total: u64,
    low: usize,
    high: usize,
}

impl From<&WeightedDist> for CumulativeDist {
    fn from(d: &WeightedDist) -> Self {
        let mut acc = 0;
        let dl = d.weights[..d.len() - 1]
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { dl, total: d.total, low: 0, high: d.len() - 1 }
    }
}

impl CumulativeDist {
    /// Builds a configuration directly; checks the window invariant.
    pub fn from_parts(dl: Vec<u64>, total: u64, low: usize, high: usize) -> Result<Self, SamplerError> {
        let c = Self { dl, total, low, high };
        c.check_invariant()?;
        Ok(c)
    }

    pub fn low(&self) -> usize {
        self.low
    }

    pub fn high(&self) -> usize {
        self.high
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn dl(&self) -> &[u64] {
        &self.dl
    }

    /// `dL[low..high]`.
    pub fn window(&self) -> &[u64] {
        &self.dl[self.low..self.high]
    }

    pub fn is_terminal(&self) -> bool {
        self.low == self.high
    }

    /// Number of outcomes still possible.
    pub fn support_size(&self) -> usize {
        self.high - self.low + 1
    }

    pub fn check_invariant(&self) -> Result<(), SamplerError> {
        let breach = |msg: String| Err(SamplerError::InvariantBreach(msg));
        if self.low > self.high || self.high > self.dl.len() {
            return breach(format!("window [{}, {}) over {} entries", self.low, self.high, self.dl.len()));
        }
        let w = self.window();
        if let Some(v) = w.iter().find(|&&v| v == 0 || v >= self.total) {
            return breach(format!("entry {v} outside (0, {})", self.total));
        }
        if w.windows(2).any(|p| p[0] >= p[1]) {
            return breach(format!("window {w:?} not strictly increasing"));
        }
        Ok(())
    }

    /// Heads: double the entries below the half line, then close the window.
    pub fn step_left(&mut self) -> Result<(), SamplerError> {
        if self.is_terminal() {
            return Err(SamplerError::Terminated(self.low));
        }
        let mut n = self.low;
        while n < self.high && 2 * self.dl[n] < self.total {
            self.dl[n] *= 2;
            n += 1;
        }
        self.high = n;
        self.check_invariant()
    }

    /// Tails: reflect the entries above the half line, then open the window.
    pub fn step_right(&mut self) -> Result<(), SamplerError> {
        if self.is_terminal() {
            return Err(SamplerError::Terminated(self.low));
        }
        let mut n = self.high;
        while n > self.low && 2 * self.dl[n - 1] > self.total {
            self.dl[n - 1] = 2 * self.dl[n - 1] - self.total;
            n -= 1;
        }
        self.low = n;
        self.check_invariant()
    }

    pub fn split_left(&self) -> Result<CumulativeDist, SamplerError> {
        let mut c = self.clone();
        c.step_left()?;
        Ok(c)
    }

    pub fn split_right(&self) -> Result<CumulativeDist, SamplerError> {
        let mut c = self.clone();
        c.step_right()?;
        Ok(c)
    }

    /// Identity of the configuration as a machine node.
    pub fn key(&self) -> (usize, Vec<u64>, usize) {
        (self.low, self.window().to_vec(), self.high)
    }

    /// Probability of each remaining outcome `low..=high`, exactly.
    pub fn outcome_probs(&self) -> Vec<Rational> {
        let total = Rational::from_integer(self.total.into());
        let mut prev = Rational::zero();
        let mut out = Vec::with_capacity(self.support_size());
        for &v in self.window() {
            let v = Rational::from_integer(v.into()) / &total;
            out.push(&v - &prev);
            prev = v;
        }
        out.push(Rational::one() - prev);
        out
    }
}
