use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use super::LangError;
use crate::rational::{format_literal, Rational};

/// Upper limit on the number of states a space may enumerate.
pub const MAX_STATES: usize = 1 << 22;

/// A scalar value: an exact number, a symbolic token such as `H`, or a
/// boolean (which only ever arises from evaluating guards).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Num(Rational),
    Sym(Arc<str>),
    Bool(bool),
}

impl Value {
    pub fn sym(name: &str) -> Self {
        Value::Sym(Arc::from(name))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Num(_) => "number",
            Value::Sym(_) => "token",
            Value::Bool(_) => "boolean",
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Num(r) => f.write_str(&format_literal(r)),
            Value::Sym(s) => f.write_str(s),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

impl From<Rational> for Value {
    fn from(r: Rational) -> Self {
        Value::Num(r)
    }
}

/// One program variable and its finite, ordered set of values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarDomain {
    name: String,
    values: Vec<Value>,
}

impl VarDomain {
    pub fn new(name: impl Into<String>, values: Vec<Value>) -> Result<Self, LangError> {
        let name = name.into();
        if values.is_empty() {
            return Err(LangError::EmptyDomain(name));
        }
        for (i, v) in values.iter().enumerate() {
            if matches!(v, Value::Bool(_)) {
                return Err(LangError::BadDomainValue { var: name, value: v.to_string() });
            }
            if values[..i].contains(v) {
                return Err(LangError::DuplicateDomainValue { var: name, value: v.to_string() });
            }
        }
        Ok(Self { name, values })
    }

    pub fn numeric(name: impl Into<String>, values: impl IntoIterator<Item = Rational>) -> Result<Self, LangError> {
        Self::new(name, values.into_iter().map(Value::Num).collect())
    }

    pub fn tokens(name: impl Into<String>, tokens: &[&str]) -> Result<Self, LangError> {
        Self::new(name, tokens.iter().map(|t| Value::sym(t)).collect())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// The finite product of the declared variable domains. States are numbered
/// in mixed radix with the first declared variable most significant.
#[derive(Debug, Clone)]
pub struct StateSpace {
    domains: Vec<VarDomain>,
    strides: Vec<usize>,
    size: usize,
    positions: Vec<HashMap<Value, usize>>,
}

impl PartialEq for StateSpace {
    fn eq(&self, other: &Self) -> bool {
        self.domains == other.domains
    }
}

impl StateSpace {
    pub fn new(domains: Vec<VarDomain>) -> Result<Self, LangError> {
        for (i, d) in domains.iter().enumerate() {
            if domains[..i].iter().any(|e| e.name == d.name) {
                return Err(LangError::DuplicateVariable(d.name.clone()));
            }
        }
        // a variable may not share its name with a token value
        for d in &domains {
            for e in &domains {
                if e.values.iter().any(|v| matches!(v, Value::Sym(s) if **s == *d.name)) {
                    return Err(LangError::VariableShadowsToken(d.name.clone()));
                }
            }
        }
        let mut size = 1usize;
        let mut strides = vec![0; domains.len()];
        for (i, d) in domains.iter().enumerate().rev() {
            strides[i] = size;
            size = size
                .checked_mul(d.len())
                .filter(|&s| s <= MAX_STATES)
                .ok_or(LangError::SpaceTooLarge(MAX_STATES))?;
        }
        let positions = domains
            .iter()
            .map(|d| d.values.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect())
            .collect();
        Ok(Self { domains, strides, size, positions })
    }

    /// A space with no variables and exactly one state.
    pub fn unit() -> Self {
        Self::new(Vec::new()).expect("empty space is valid")
    }

    pub fn domains(&self) -> &[VarDomain] {
        &self.domains
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.domains.iter().position(|d| d.name == name)
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.domains[var].name
    }

    /// Whether `name` is a token value in some domain.
    pub fn is_token(&self, name: &str) -> bool {
        self.domains
            .iter()
            .any(|d| d.values.iter().any(|v| matches!(v, Value::Sym(s) if **s == *name)))
    }

    /// Position of `value` within the domain of `var`.
    pub fn position(&self, var: usize, value: &Value) -> Option<usize> {
        self.positions[var].get(value).copied()
    }

    pub fn digit(&self, state: usize, var: usize) -> usize {
        (state / self.strides[var]) % self.domains[var].len()
    }

    /// The state reached from `state` by setting `var` to the value at
    /// domain position `pos`.
    pub fn with_position(&self, state: usize, var: usize, pos: usize) -> usize {
        let old = self.digit(state, var);
        state - old * self.strides[var] + pos * self.strides[var]
    }

    pub fn values_of(&self, state: usize) -> Vec<Value> {
        (0..self.domains.len())
            .map(|v| self.domains[v].values[self.digit(state, v)].clone())
            .collect()
    }

    pub fn state(&self, index: usize) -> State {
        assert!(index < self.size, "state index {index} out of range");
        State { index, values: self.values_of(index) }
    }

    pub fn states(&self) -> impl Iterator<Item = State> + '_ {
        (0..self.size).map(|i| self.state(i))
    }

    /// Index of the state with exactly these values, if they are all in-domain.
    pub fn index_of(&self, values: &[Value]) -> Option<usize> {
        if values.len() != self.domains.len() {
            return None;
        }
        let mut index = 0;
        for (var, v) in values.iter().enumerate() {
            index += self.position(var, v)? * self.strides[var];
        }
        Some(index)
    }

    /// Human-readable `x=1, c=H` rendering of a state.
    pub fn describe(&self, state: usize) -> String {
        if self.domains.is_empty() {
            return "()".to_string();
        }
        self.values_of(state)
            .iter()
            .zip(&self.domains)
            .map(|(v, d)| format!("{}={}", d.name, v))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// `true` when every value of `var` is a number.
    pub fn is_numeric(&self, var: usize) -> bool {
        self.domains[var].values.iter().all(|v| matches!(v, Value::Num(_)))
    }
}

/// One valuation of every declared variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    pub index: usize,
    pub values: Vec<Value>,
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
