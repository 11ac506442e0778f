use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{LoopConfig, ProbeFamily, WpEngine, WpError};
use crate::lang::{Expr, Program, StateSpace};
use crate::rational::{serialize_rational, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub probe: String,
    pub state: String,
    #[serde(skip)]
    pub state_index: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub lhs: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Largest combined loop residual met while checking.
    #[serde(serialize_with = "serialize_rational")]
    pub residual: Rational,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    pub fn holds(residual: Rational) -> Self {
        Self { status: Status::Holds, counterexample: None, residual, note: None }
    }

    pub fn fails(cx: Counterexample, residual: Rational) -> Self {
        Self { status: Status::Fails, counterexample: Some(cx), residual, note: None }
    }

    pub fn inconclusive(note: String) -> Self {
        Self { status: Status::Inconclusive, counterexample: None, residual: Rational::zero(), note: Some(note) }
    }
}

#[derive(Clone, Copy)]
enum Relation {
    Equal,
    Refines,
}

/// `wp(p) = wp(q)` on every probe and state, up to loop residuals.
pub fn check_equal(
    p: &Program,
    q: &Program,
    probes: &ProbeFamily,
    space: &StateSpace,
    cfg: &LoopConfig,
) -> Result<Verdict, WpError> {
    compare(p, q, probes, space, cfg, None, Relation::Equal)
}

/// [`check_equal`] restricted to initial states satisfying `initial`.
pub fn check_equal_on(
    p: &Program,
    q: &Program,
    probes: &ProbeFamily,
    space: &StateSpace,
    cfg: &LoopConfig,
    initial: &Expr,
) -> Result<Verdict, WpError> {
    compare(p, q, probes, space, cfg, Some(initial), Relation::Equal)
}

/// `wp(spec) <= wp(imp)` on every probe and state, up to loop residuals.
pub fn check_refines(
    spec: &Program,
    imp: &Program,
    probes: &ProbeFamily,
    space: &StateSpace,
    cfg: &LoopConfig,
) -> Result<Verdict, WpError> {
    compare(spec, imp, probes, space, cfg, None, Relation::Refines)
}

pub fn check_refines_on(
    spec: &Program,
    imp: &Program,
    probes: &ProbeFamily,
    space: &StateSpace,
    cfg: &LoopConfig,
    initial: &Expr,
) -> Result<Verdict, WpError> {
    compare(spec, imp, probes, space, cfg, Some(initial), Relation::Refines)
}

fn compare(
    left: &Program,
    right: &Program,
    probes: &ProbeFamily,
    space: &StateSpace,
    cfg: &LoopConfig,
    initial: Option<&Expr>,
    relation: Relation,
) -> Result<Verdict, WpError> {
    let states: Vec<usize> = match initial {
        None => (0..space.len()).collect(),
        Some(pred) => {
            let mut keep = Vec::new();
            for st in space.states() {
                let ok = pred
                    .eval_bool(&st.values)
                    .map_err(|source| WpError::Eval { state: space.describe(st.index), source })?;
                if ok {
                    keep.push(st.index);
                }
            }
            keep
        }
    };
    let le = WpEngine::new(left, space, cfg.clone());
    let re = WpEngine::new(right, space, cfg.clone());
    let mut worst = Rational::zero();
    for probe in &probes.probes {
        let (l, r) = match (le.wp(&probe.values), re.wp(&probe.values)) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e @ WpError::Inconclusive { .. }), _) | (_, Err(e @ WpError::Inconclusive { .. })) => {
                return Ok(Verdict::inconclusive(format!("probe {}: {e}", probe.label)));
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let slack = &l.loop_residual + &r.loop_residual;
        for &s in &states {
            let (lhs, rhs) = (l.pre.get(s), r.pre.get(s));
            let bad = match relation {
                Relation::Equal => (lhs - rhs).abs() > slack,
                Relation::Refines => *lhs > rhs + &slack,
            };
            if bad {
                let cx = Counterexample {
                    probe: probe.label.clone(),
                    state: space.describe(s),
                    state_index: s,
                    lhs: lhs.clone(),
                    rhs: rhs.clone(),
                };
                return Ok(Verdict::fails(cx, slack));
            }
        }
        if slack > worst {
            worst = slack;
        }
    }
    Ok(Verdict::holds(worst))
}

/// Runs `check` at every grid point in parallel; results keep grid order.
pub fn sweep<T, F>(grid: &[Rational], check: F) -> Vec<(Rational, T)>
where
    T: Send,
    F: Fn(&Rational) -> T + Sync,
{
    grid.par_iter().map(|p| (p.clone(), check(p))).collect()
}
