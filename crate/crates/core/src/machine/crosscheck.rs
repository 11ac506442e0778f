use serde::Serialize;

use super::{analyze, build_machine, MachineAnalysis, MachineError, DEFAULT_MAX_NODES};
use crate::rational::to_f64;
use crate::sampler::{run_trials, TrialReport, WeightedDist};

/// Simulation measured against exact analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crosscheck {
    pub analysis: MachineAnalysis,
    pub trials: TrialReport,
    /// Standard score of the empirical mean flip count.
    pub flips_z: f64,
    /// Standard score of each outcome's empirical frequency.
    pub freq_z: Vec<f64>,
}

impl Crosscheck {
    pub fn max_abs_z(&self) -> f64 {
        self.freq_z.iter().chain([&self.flips_z]).fold(0.0, |m, z| m.max(z.abs()))
    }
}

fn z(observed: f64, expected: f64, sigma: f64) -> f64 {
    if sigma > 0.0 {
        (observed - expected) / sigma
    } else if observed == expected {
        0.0
    } else {
        f64::INFINITY
    }
}

pub fn crosscheck(d: &WeightedDist, runs: u64, seed: u64) -> Result<Crosscheck, MachineError> {
    let analysis = analyze(&build_machine(d, DEFAULT_MAX_NODES)?)?;
    let trials = run_trials(d, runs, seed)?;
    let n = runs.max(1) as f64;
    let flips_z = z(trials.avg_flips, to_f64(&analysis.expected_flips), trials.flip_std_dev() / n.sqrt());
    let freq_z = analysis
        .outcome_prob
        .values()
        .zip(&trials.tallies)
        .map(|(p, &t)| {
            let p = to_f64(p);
            z(t as f64 / n, p, (p * (1.0 - p) / n).sqrt())
        })
        .collect();
    Ok(Crosscheck { analysis, trials, flips_z, freq_z })
}
