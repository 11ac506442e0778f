use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use super::space::{StateSpace, Value};
use crate::rational::{format_literal, Rational};

/// A variable occurrence, resolved against a [`StateSpace`] at parse time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRef {
    pub name: Arc<str>,
    pub slot: usize,
}

impl VarRef {
    pub fn new(space: &StateSpace, name: &str) -> Option<Self> {
        space.var_index(name).map(|slot| VarRef { name: Arc::from(name), slot })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Min,
    Max,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Min => "min",
            BinOp::Max => "max",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&",
            BinOp::Or => "|",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 3,
            BinOp::Add | BinOp::Sub => 4,
            BinOp::Mul | BinOp::Div => 5,
            BinOp::Min | BinOp::Max => ATOM,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 3
    }
}

const UNARY: u8 = 6;
const ATOM: u8 = 7;

/// Expressions over program variables: arithmetic, comparisons, boolean
/// connectives and the Iverson bracket `[b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Num(Rational),
    Sym(Arc<str>),
    Bool(bool),
    Var(VarRef),
    Neg(Box<Expr>),
    Not(Box<Expr>),
    Iverson(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("type mismatch: `{op}` applied to {left} and {right}")]
    TypeMismatch { op: &'static str, left: &'static str, right: &'static str },
    #[error("type mismatch: `{op}` expects {expected}, got {got}")]
    Expected { op: &'static str, expected: &'static str, got: &'static str },
    #[error("variable slot {0} is unbound")]
    Unbound(usize),
}

impl Expr {
    pub fn num(r: Rational) -> Self {
        Expr::Num(r)
    }

    pub fn var(v: VarRef) -> Self {
        Expr::Var(v)
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn iverson(e: Expr) -> Self {
        Expr::Iverson(Box::new(e))
    }

    /// Syntactically boolean: a comparison, connective, negation or literal.
    pub fn is_boolean(&self) -> bool {
        match self {
            Expr::Bool(_) | Expr::Not(_) => true,
            Expr::Bin(op, _, _) => op.is_comparison() || matches!(op, BinOp::And | BinOp::Or),
            _ => false,
        }
    }

    /// Evaluates against a full valuation indexed by variable slot.
    pub fn eval(&self, env: &[Value]) -> Result<Value, EvalError> {
        match self {
            Expr::Num(r) => Ok(Value::Num(r.clone())),
            Expr::Sym(s) => Ok(Value::Sym(s.clone())),
            Expr::Bool(b) => Ok(Value::Bool(*b)),
            Expr::Var(v) => env.get(v.slot).cloned().ok_or(EvalError::Unbound(v.slot)),
            Expr::Neg(e) => match e.eval(env)? {
                Value::Num(r) => Ok(Value::Num(-r)),
                other => Err(EvalError::Expected { op: "-", expected: "number", got: other.kind() }),
            },
            Expr::Not(e) => match e.eval(env)? {
                Value::Bool(b) => Ok(Value::Bool(!b)),
                other => Err(EvalError::Expected { op: "!", expected: "boolean", got: other.kind() }),
            },
            Expr::Iverson(e) => match e.eval(env)? {
                Value::Bool(b) => Ok(Value::Num(if b { Rational::one() } else { Rational::zero() })),
                other => Err(EvalError::Expected { op: "[.]", expected: "boolean", got: other.kind() }),
            },
            Expr::Bin(op, l, r) => {
                // short-circuit connectives so guards like `x != 0 & 1/x < 2` are total
                if matches!(op, BinOp::And | BinOp::Or) {
                    let left = expect_bool(op.symbol(), l.eval(env)?)?;
                    if (*op == BinOp::And && !left) || (*op == BinOp::Or && left) {
                        return Ok(Value::Bool(left));
                    }
                    return Ok(Value::Bool(expect_bool(op.symbol(), r.eval(env)?)?));
                }
                apply(*op, l.eval(env)?, r.eval(env)?)
            }
        }
    }

    /// Evaluates to a number, or fails with a type error.
    pub fn eval_num(&self, env: &[Value]) -> Result<Rational, EvalError> {
        match self.eval(env)? {
            Value::Num(r) => Ok(r),
            other => Err(EvalError::Expected { op: "expression", expected: "number", got: other.kind() }),
        }
    }

    pub fn eval_bool(&self, env: &[Value]) -> Result<bool, EvalError> {
        expect_bool("condition", self.eval(env)?)
    }

    /// Replaces every occurrence of variable `slot` by `replacement`.
    pub fn substitute(&self, slot: usize, replacement: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(slot, replacement));
        match self {
            Expr::Var(v) if v.slot == slot => replacement.clone(),
            Expr::Num(_) | Expr::Sym(_) | Expr::Bool(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => Expr::Neg(sub(e)),
            Expr::Not(e) => Expr::Not(sub(e)),
            Expr::Iverson(e) => Expr::Iverson(sub(e)),
            Expr::Bin(op, l, r) => Expr::Bin(*op, sub(l), sub(r)),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.slot);
            }
            Expr::Num(_) | Expr::Sym(_) | Expr::Bool(_) => {}
            Expr::Neg(e) | Expr::Not(e) | Expr::Iverson(e) => e.collect_vars(out),
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) | Expr::Not(_) => UNARY,
            Expr::Num(r) if *r < Rational::zero() => UNARY,
            _ => ATOM,
        }
    }
}

fn expect_bool(op: &'static str, v: Value) -> Result<bool, EvalError> {
    match v {
        Value::Bool(b) => Ok(b),
        other => Err(EvalError::Expected { op, expected: "boolean", got: other.kind() }),
    }
}

fn apply(op: BinOp, l: Value, r: Value) -> Result<Value, EvalError> {
    use BinOp::*;
    let mismatch = |l: &Value, r: &Value| EvalError::TypeMismatch { op: op.symbol(), left: l.kind(), right: r.kind() };
    match op {
        Eq | Ne => {
            let same_kind = std::mem::discriminant(&l) == std::mem::discriminant(&r);
            if !same_kind {
                return Err(mismatch(&l, &r));
            }
            Ok(Value::Bool((l == r) == (op == Eq)))
        }
        _ => {
            let (a, b) = match (&l, &r) {
                (Value::Num(a), Value::Num(b)) => (a, b),
                _ => return Err(mismatch(&l, &r)),
            };
            Ok(match op {
                Add => Value::Num(a + b),
                Sub => Value::Num(a - b),
                Mul => Value::Num(a * b),
                Div => {
                    if b.is_zero() {
                        return Err(EvalError::DivisionByZero);
                    }
                    Value::Num(a / b)
                }
                Min => Value::Num(a.min(b).clone()),
                Max => Value::Num(a.max(b).clone()),
                Lt => Value::Bool(a < b),
                Le => Value::Bool(a <= b),
                Gt => Value::Bool(a > b),
                Ge => Value::Bool(a >= b),
                Eq | Ne | And | Or => unreachable!(),
            })
        }
    }
}

struct Prec<'a>(&'a Expr, u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.precedence() < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => f.write_str(&format_literal(r)),
            Expr::Sym(s) => f.write_str(s),
            Expr::Bool(b) => f.write_str(if *b { "true" } else { "false" }),
            Expr::Var(v) => f.write_str(&v.name),
            // `-3` would re-parse as a literal, so keep the negation explicit
            Expr::Neg(e) if matches!(**e, Expr::Num(_)) => write!(f, "-({e})"),
            Expr::Neg(e) => write!(f, "-{}", Prec(e, UNARY)),
            Expr::Not(e) => write!(f, "!{}", Prec(e, UNARY)),
            Expr::Iverson(e) => write!(f, "[{e}]"),
            Expr::Bin(op @ (BinOp::Min | BinOp::Max), l, r) => write!(f, "{}({l}, {r})", op.symbol()),
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                let left_min = if op.is_comparison() { p + 1 } else { p };
                write!(f, "{} {} {}", Prec(l, left_min), op.symbol(), Prec(r, p + 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn x() -> Expr {
        Expr::Var(VarRef { name: Arc::from("x"), slot: 0 })
    }

    #[test]
    fn iverson_and_arith() {
        let env = [Value::Num(int(1))];
        let e = Expr::iverson(Expr::bin(BinOp::Eq, Expr::Sym("H".into()), Expr::Sym("H".into())));
        assert_eq!(e.eval(&env).unwrap(), Value::Num(int(1)));
        let e = Expr::bin(BinOp::Add, Expr::bin(BinOp::Sub, Expr::Num(int(1)), x()), Expr::Num(int(3)));
        assert_eq!(e.eval(&env).unwrap(), Value::Num(int(3)));
    }

    #[test]
    fn errors() {
        let env = [Value::Num(int(0))];
        let e = Expr::bin(BinOp::Div, Expr::Num(int(1)), x());
        assert_eq!(e.eval(&env), Err(EvalError::DivisionByZero));
        let e = Expr::bin(BinOp::Eq, Expr::Sym("H".into()), x());
        assert!(matches!(e.eval(&env), Err(EvalError::TypeMismatch { .. })));
        let e = Expr::bin(BinOp::Lt, Expr::Sym("H".into()), Expr::Sym("T".into()));
        assert!(matches!(e.eval(&env), Err(EvalError::TypeMismatch { .. })));
    }

    #[test]
    fn short_circuit() {
        let env = [Value::Num(int(0))];
        let guard = Expr::bin(
            BinOp::And,
            Expr::bin(BinOp::Ne, x(), Expr::Num(int(0))),
            Expr::bin(BinOp::Lt, Expr::bin(BinOp::Div, Expr::Num(int(1)), x()), Expr::Num(int(2))),
        );
        assert_eq!(guard.eval(&env).unwrap(), Value::Bool(false));
    }

    #[test]
    fn substitution_is_syntactic() {
        let e = Expr::bin(BinOp::Add, x(), Expr::Num(int(3)));
        assert_eq!(e.substitute(0, &x()), e);
        let r = e.substitute(0, &Expr::Num(rat(1, 2)));
        assert_eq!(r.to_string(), "1/2 + 3");
    }

    #[test]
    fn display_parenthesises_by_precedence() {
        let e = Expr::bin(BinOp::Mul, Expr::bin(BinOp::Add, x(), Expr::Num(int(1))), Expr::Num(int(2)));
        assert_eq!(e.to_string(), "(x + 1) * 2");
        let e = Expr::bin(BinOp::Sub, x(), Expr::bin(BinOp::Sub, x(), Expr::Num(int(1))));
        assert_eq!(e.to_string(), "x - (x - 1)");
        assert_eq!(Expr::Neg(Box::new(Expr::Num(int(3)))).to_string(), "-(3)");
    }
}
