use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::check::{Counterexample, Verdict};
use super::resolve::enumerate_resolutions;
use super::{Expectation, LoopConfig, WpEngine, WpError};
use crate::lang::{Expr, Program, StateSpace, VariantSpec};
use crate::rational::Rational;

/// Checks the probabilistic variant rule at every guard-satisfying state.
pub fn check_variant(program: &Program, spec: &VariantSpec, space: &StateSpace, cfg: &LoopConfig) -> Result<Verdict, WpError> {
    let Program::While(guard, _) = program else { return Err(WpError::NotALoop) };
    if !guard.is_boolean() {
        return Err(WpError::NotALoop);
    }
    let mut states = Vec::new();
    for st in space.states() {
        if eval_guard(guard, space, st.index, &st.values)? {
            states.push(st.index);
        }
    }
    run(program, spec, space, cfg, states)
}

/// Like [`check_variant`], but only over guard states reachable through
/// loop iterations from initial states satisfying `initial`. The loop body
/// must be loop-free.
pub fn check_variant_from(
    program: &Program,
    spec: &VariantSpec,
    space: &StateSpace,
    cfg: &LoopConfig,
    initial: &Expr,
) -> Result<Verdict, WpError> {
    let Program::While(guard, body) = program else { return Err(WpError::NotALoop) };
    if !guard.is_boolean() {
        return Err(WpError::NotALoop);
    }
    let steps = enumerate_resolutions(body, space)?;
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    for st in space.states() {
        let start = initial
            .eval_bool(&st.values)
            .map_err(|source| WpError::Eval { state: space.describe(st.index), source })?;
        if start && eval_guard(guard, space, st.index, &st.values)? && seen.insert(st.index) {
            queue.push_back(st.index);
        }
    }
    while let Some(s) = queue.pop_front() {
        for d in &steps.per_state[s].outputs {
            for &t in d.keys() {
                if eval_guard(guard, space, t, &space.values_of(t))? && seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
    }
    run(program, spec, space, cfg, seen.into_iter().collect())
}

fn eval_guard(guard: &Expr, space: &StateSpace, s: usize, values: &[crate::lang::Value]) -> Result<bool, WpError> {
    guard.eval_bool(values).map_err(|source| WpError::Eval { state: space.describe(s), source })
}

fn natural(spec: &VariantSpec, space: &StateSpace, s: usize) -> Result<BigInt, WpError> {
    let v = spec
        .variant
        .eval_num(&space.values_of(s))
        .map_err(|source| WpError::Eval { state: space.describe(s), source })?;
    if !v.is_integer() || v.is_negative() {
        return Err(WpError::VariantNotNatural { state: space.describe(s), value: v.to_string() });
    }
    Ok(v.to_integer())
}

fn run(program: &Program, spec: &VariantSpec, space: &StateSpace, cfg: &LoopConfig, states: Vec<usize>) -> Result<Verdict, WpError> {
    let Program::While(guard, body) = program else { unreachable!() };
    let bound = BigInt::from(spec.upper_bound);
    let mut by_value: BTreeMap<BigInt, Vec<usize>> = BTreeMap::new();
    for &s in &states {
        let v = natural(spec, space, s)?;
        if v > bound {
            let cx = Counterexample {
                probe: "variant upper bound".into(),
                state: space.describe(s),
                state_index: s,
                lhs: Rational::from_integer(v),
                rhs: Rational::from_integer(bound),
            };
            return Ok(Verdict::fails(cx, Rational::zero()));
        }
        by_value.entry(v).or_default().push(s);
    }
    let engine = WpEngine::new(body, space, cfg.clone());
    let mut worst = Rational::zero();
    for (k, group) in by_value {
        // decreased, or left the loop
        let mut values = Vec::with_capacity(space.len());
        for t in 0..space.len() {
            let row = space.values_of(t);
            let hit = !eval_guard(guard, space, t, &row)? || natural(spec, space, t)? < k;
            values.push(if hit { Rational::from_integer(1.into()) } else { Rational::zero() });
        }
        let post = Expectation::new(space, values)?;
        let r = match engine.wp(&post) {
            Ok(r) => r,
            Err(e @ WpError::Inconclusive { .. }) => return Ok(Verdict::inconclusive(e.to_string())),
            Err(e) => return Err(e),
        };
        for &s in &group {
            let p = r.pre.get(s);
            if p + &r.loop_residual < spec.epsilon {
                let cx = Counterexample {
                    probe: format!("P(variant < {k} or exit)"),
                    state: space.describe(s),
                    state_index: s,
                    lhs: p.clone(),
                    rhs: spec.epsilon.clone(),
                };
                return Ok(Verdict::fails(cx, r.loop_residual));
            }
        }
        if r.loop_residual > worst {
            worst = r.loop_residual;
        }
    }
    Ok(Verdict::holds(worst))
}
