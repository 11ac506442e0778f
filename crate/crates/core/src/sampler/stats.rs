//! Chi-square tests for sampler output.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

fn finish(statistic: f64, dof: usize) -> ChiSquare {
    let p_value = if dof == 0 {
        1.0
    } else {
        1.0 - ChiSquared::new(dof as f64).expect("positive degrees of freedom").cdf(statistic)
    };
    ChiSquare { statistic, dof, p_value }
}

/// Goodness of fit of `observed` counts against probabilities `expected`.
pub fn goodness_of_fit(observed: &[u64], expected: &[f64]) -> ChiSquare {
    assert_eq!(observed.len(), expected.len(), "observed and expected lengths differ");
    let n: u64 = observed.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&o, &p) in observed.iter().zip(expected) {
        let e = p * n as f64;
        if e > 0.0 {
            stat += (o as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    finish(stat, cells.saturating_sub(1))
}

/// Homogeneity of two count vectors over the same categories.
pub fn homogeneity(a: &[u64], b: &[u64]) -> ChiSquare {
    assert_eq!(a.len(), b.len(), "count vectors differ in length");
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let n = na + nb;
    let mut stat = 0.0;
    let mut cells = 0usize;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        for (o, rows) in [(x as f64, na), (y as f64, nb)] {
            let e = rows * col / n;
            if e > 0.0 {
                stat += (o - e).powi(2) / e;
            }
        }
    }
    finish(stat, cells.saturating_sub(1))
}
