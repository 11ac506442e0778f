use rayon::prelude::*;
use serde::Serialize;

use super::{sample_binary, BitSource, CumulativeDist, SamplerError, SeededBits, WeightedDist};
use crate::rational::Rational;

/// Fixed shard count, so results depend only on the seed and not on the
/// thread pool.
pub const SHARDS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialReport {
    pub runs: u64,
    pub seed: u64,
    /// Count per outcome, indexed from outcome 1 (discrete) or value 0 (binary).
    pub tallies: Vec<u64>,
    pub total_flips: u64,
    pub sum_sq_flips: u128,
    pub avg_flips: f64,
    /// `tally / runs * total / w_i`; 1.0 means perfect agreement.
    pub rel_freq: Vec<f64>,
}

impl TrialReport {
    /// Sample standard deviation of the flip count.
    pub fn flip_std_dev(&self) -> f64 {
        if self.runs < 2 {
            return 0.0;
        }
        let n = self.runs as f64;
        let mean = self.avg_flips;
        ((self.sum_sq_flips as f64 - n * mean * mean) / (n - 1.0)).max(0.0).sqrt()
    }
}

struct Shard {
    tallies: Vec<u64>,
    flips: u64,
    sq: u128,
}

fn sharded<F>(outcomes: usize, runs: u64, seed: u64, draw: F) -> Result<Shard, SamplerError>
where
    F: Fn(&mut SeededBits) -> Result<(usize, u64), SamplerError> + Sync,
{
    let shards = (0..SHARDS)
        .into_par_iter()
        .map(|i| {
            let n = runs / SHARDS + u64::from(i < runs % SHARDS);
            let mut bits = SeededBits::with_stream(seed, i);
            let mut s = Shard { tallies: vec![0; outcomes], flips: 0, sq: 0 };
            for _ in 0..n {
                let (o, f) = draw(&mut bits)?;
                s.tallies[o] += 1;
                s.flips += f;
                s.sq += u128::from(f) * u128::from(f);
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>, SamplerError>>()?;
    Ok(shards.into_iter().fold(Shard { tallies: vec![0; outcomes], flips: 0, sq: 0 }, |mut a, s| {
        a.tallies.iter_mut().zip(&s.tallies).for_each(|(x, y)| *x += y);
        a.flips += s.flips;
        a.sq += s.sq;
        a
    }))
}

fn report(runs: u64, seed: u64, s: Shard, expected: &[f64]) -> TrialReport {
    let avg_flips = if runs == 0 { 0.0 } else { s.flips as f64 / runs as f64 };
    let rel_freq = s
        .tallies
        .iter()
        .zip(expected)
        .map(|(&t, &e)| if runs == 0 || e == 0.0 { 0.0 } else { t as f64 / runs as f64 / e })
        .collect();
    TrialReport { runs, seed, tallies: s.tallies, total_flips: s.flips, sum_sq_flips: s.sq, avg_flips, rel_freq }
}

/// Runs the discrete sampler `runs` times from `seed`.
pub fn run_trials(d: &WeightedDist, runs: u64, seed: u64) -> Result<TrialReport, SamplerError> {
    let start = CumulativeDist::from(d);
    let s = sharded(d.len(), runs, seed, |bits| {
        let mut c = start.clone();
        let mut flips = 0;
        while !c.is_terminal() {
            flips += 1;
            if bits.bit() == 0 {
                c.step_left()?;
            } else {
                c.step_right()?;
            }
        }
        Ok((c.low(), flips))
    })?;
    let total = d.total() as f64;
    let expected: Vec<f64> = d.weights().iter().map(|&w| w as f64 / total).collect();
    Ok(report(runs, seed, s, &expected))
}

/// Runs the binary sampler `runs` times; tallies are indexed by the value of `x`.
pub fn run_binary_trials(p: &Rational, runs: u64, seed: u64) -> Result<TrialReport, SamplerError> {
    let s = sharded(2, runs, seed, |bits| {
        let t = sample_binary(p, bits as &mut dyn BitSource)?;
        Ok((t.outcome, t.flips))
    })?;
    let pf = crate::rational::to_f64(p);
    Ok(report(runs, seed, s, &[1.0 - pf, pf]))
}
