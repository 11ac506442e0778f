use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{Machine, MachineError, NodeKind};
use crate::rational::{format_rational, serialize_rational, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MachineAnalysis {
    /// Absorption probability at each 1-based outcome from the root.
    #[serde(serialize_with = "serialize_outcomes")]
    pub outcome_prob: BTreeMap<usize, Rational>,
    #[serde(serialize_with = "serialize_rational")]
    pub expected_flips: Rational,
    pub node_count: usize,
}

fn serialize_outcomes<S: Serializer>(m: &BTreeMap<usize, Rational>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k.to_string(), format_rational(v))))
}

/// Solves for absorption probabilities and expected flips exactly.
pub fn analyze(m: &Machine) -> Result<MachineAnalysis, MachineError> {
    let interior: Vec<usize> = (0..m.nodes.len()).filter(|&i| !m.nodes[i].is_leaf()).collect();
    let mut slot = vec![usize::MAX; m.nodes.len()];
    for (k, &i) in interior.iter().enumerate() {
        slot[i] = k;
    }
    let n = interior.len();
    let cols = m.outcomes + 1;
    let half = Rational::new(1.into(), 2.into());

    // Row k: x_k - ½x_heads - ½x_tails = rhs, with one rhs column per
    // outcome and a final column for expected flips.
    let mut a = vec![vec![Rational::zero(); n]; n];
    let mut b = vec![vec![Rational::zero(); cols]; n];
    for (k, &i) in interior.iter().enumerate() {
        let NodeKind::Interior { heads, tails } = m.nodes[i].kind else { unreachable!() };
        a[k][k] += Rational::one();
        for succ in [heads, tails] {
            match m.nodes[succ].kind {
                NodeKind::Interior { .. } => a[k][slot[succ]] -= &half,
                NodeKind::Leaf { outcome } => b[k][outcome - 1] += &half,
            }
        }
        b[k][m.outcomes] = Rational::one();
    }
    solve(&mut a, &mut b)?;

    let mut outcome_prob: BTreeMap<usize, Rational> = (1..=m.outcomes).map(|o| (o, Rational::zero())).collect();
    let expected_flips = match m.nodes[m.root].kind {
        NodeKind::Leaf { outcome } => {
            outcome_prob.insert(outcome, Rational::one());
            Rational::zero()
        }
        NodeKind::Interior { .. } => {
            let row = &b[slot[m.root]];
            for o in 1..=m.outcomes {
                outcome_prob.insert(o, row[o - 1].clone());
            }
            row[m.outcomes].clone()
        }
    };
    let sum: Rational = outcome_prob.values().sum();
    if !sum.is_one() || outcome_prob.values().any(Signed::is_negative) {
        return Err(MachineError::NotConserved(format_rational(&sum)));
    }
    Ok(MachineAnalysis { outcome_prob, expected_flips, node_count: m.node_count() })
}

/// Gauss-Jordan elimination with partial pivoting on magnitude; leaves the
/// solution in `b`.
fn solve(a: &mut [Vec<Rational>], b: &mut [Vec<Rational>]) -> Result<(), MachineError> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .max_by(|&x, &y| a[x][col].abs().cmp(&a[y][col].abs()))
            .ok_or(MachineError::Singular)?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut().skip(col) {
            *v *= &inv;
        }
        for v in b[col].iter_mut() {
            *v *= &inv;
        }
        let (prow_a, prow_b) = (a[col].clone(), b[col].clone());
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for (v, p) in a[r].iter_mut().zip(&prow_a).skip(col) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            for (v, p) in b[r].iter_mut().zip(&prow_b) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
    }
    Ok(())
}
