use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Expectation;
use crate::lang::{Expr, Program, StateSpace};
use crate::rational::{rat, Rational};

/// Number of seeded random probes in the standard family.
pub const RANDOM_PROBES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub label: String,
    pub values: Expectation,
}

/// A finite family of post-expectations standing in for "every Post".
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeFamily {
    pub probes: Vec<Probe>,
    pub seed: u64,
}

impl ProbeFamily {
    /// Indicators of every state, brackets of every predicate in the given
    /// programs, and [`RANDOM_PROBES`] random expectations valued in
    /// `{0, 1/8, ..., 4}`.
    pub fn standard(space: &StateSpace, programs: &[&Program], seed: u64) -> Self {
        let all: Vec<usize> = (0..space.var_count()).collect();
        Self::observing(space, programs, &all, seed)
    }

    /// Like [`ProbeFamily::standard`], but every probe depends only on the
    /// variables in `observables`; the others are treated as local.
    pub fn observing(space: &StateSpace, programs: &[&Program], observables: &[usize], seed: u64) -> Self {
        let view = View::new(space, observables);
        let mut probes = Vec::new();
        for class in 0..view.classes {
            let label = format!("[{}]", view.describe(class));
            probes.push(Probe { label, values: Expectation::indicator(space, |s| view.class_of(s) == class) });
        }
        let mut seen: Vec<Expr> = Vec::new();
        for pred in programs.iter().flat_map(|p| p.predicates()) {
            if seen.contains(&pred) || !pred.free_vars().iter().all(|v| observables.contains(v)) {
                continue;
            }
            if let Ok(values) = Expectation::from_expr(space, &pred) {
                probes.push(Probe { label: format!("[{pred}]"), values });
            }
            seen.push(pred);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in 0..RANDOM_PROBES {
            let per_class: Vec<Rational> = (0..view.classes).map(|_| rat(rng.random_range(0..=32), 8)).collect();
            let values = (0..space.len()).map(|s| per_class[view.class_of(s)].clone()).collect();
            probes.push(Probe { label: format!("random#{i}"), values: Expectation::from_values_unchecked(values) });
        }
        Self { probes, seed }
    }

    pub fn from_probes(probes: Vec<Probe>) -> Self {
        assert!(!probes.is_empty(), "a probe family needs at least one probe");
        Self { probes, seed: 0 }
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

/// Projection of states onto the valuations of a subset of variables.
struct View<'a> {
    space: &'a StateSpace,
    vars: Vec<usize>,
    classes: usize,
}

impl<'a> View<'a> {
    fn new(space: &'a StateSpace, vars: &[usize]) -> Self {
        let classes = vars.iter().map(|&v| space.domains()[v].len()).product();
        Self { space, vars: vars.to_vec(), classes }
    }

    fn class_of(&self, state: usize) -> usize {
        self.vars
            .iter()
            .fold(0, |acc, &v| acc * self.space.domains()[v].len() + self.space.digit(state, v))
    }

    fn describe(&self, class: usize) -> String {
        if self.vars.is_empty() {
            return "true".into();
        }
        let mut digits = vec![0; self.vars.len()];
        let mut rest = class;
        for (i, &v) in self.vars.iter().enumerate().rev() {
            let size = self.space.domains()[v].len();
            digits[i] = rest % size;
            rest /= size;
        }
        self.vars
            .iter()
            .zip(digits)
            .map(|(&v, d)| format!("{}={}", self.space.var_name(v), self.space.domains()[v].values()[d]))
            .collect::<Vec<_>>()
            .join(" & ")
    }
}
