use num_traits::{Signed, Zero};
use serde::Serialize;

use super::WpError;
use crate::lang::{Expr, StateSpace};
use crate::rational::{serialize_rationals, Rational};

/// A non-negative rational per state, indexed like the owning [`StateSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Expectation {
    #[serde(serialize_with = "serialize_rationals")]
    values: Vec<Rational>,
}

impl Expectation {
    pub fn new(space: &StateSpace, values: Vec<Rational>) -> Result<Self, WpError> {
        if values.len() != space.len() {
            return Err(WpError::WrongLength { expected: space.len(), got: values.len() });
        }
        if let Some(i) = values.iter().position(|v| v.is_negative()) {
            return Err(WpError::NegativeExpectation { state: space.describe(i), value: values[i].to_string() });
        }
        Ok(Self { values })
    }

    pub fn zero(space: &StateSpace) -> Self {
        Self::constant(space, Rational::zero())
    }

    /// Panics if `c` is negative.
    pub fn constant(space: &StateSpace, c: Rational) -> Self {
        assert!(!c.is_negative(), "expectations are non-negative");
        Self { values: vec![c; space.len()] }
    }

    /// Evaluates a numeric expression, or a boolean one as its bracket.
    pub fn from_expr(space: &StateSpace, e: &Expr) -> Result<Self, WpError> {
        let e = if e.is_boolean() { Expr::iverson(e.clone()) } else { e.clone() };
        let values = space
            .states()
            .map(|st| {
                e.eval_num(&st.values)
                    .map_err(|source| WpError::Eval { state: space.describe(st.index), source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(space, values)
    }

    pub fn indicator(space: &StateSpace, pred: impl Fn(usize) -> bool) -> Self {
        let values = (0..space.len())
            .map(|s| if pred(s) { Rational::from_integer(1.into()) } else { Rational::zero() })
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, state: usize) -> &Rational {
        &self.values[state]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Rational {
        self.values.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Panics if `c` is negative.
    pub fn scale(&self, c: &Rational) -> Self {
        assert!(!c.is_negative(), "expectations are non-negative");
        Self { values: self.values.iter().map(|v| v * c).collect() }
    }

    /// The common value if every state has the same one.
    pub fn as_constant(&self) -> Option<&Rational> {
        let first = self.values.first()?;
        self.values.iter().all(|v| v == first).then_some(first)
    }

    /// Pointwise `self <= other`.
    pub fn le(&self, other: &Expectation) -> bool {
        self.values.len() == other.values.len() && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    pub(crate) fn from_values_unchecked(values: Vec<Rational>) -> Self {
        Self { values }
    }
}
