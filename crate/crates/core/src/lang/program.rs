use std::fmt;

use super::expr::{Expr, VarRef};
use crate::rational::Rational;

/// `x :dist [e1: p1, e2: p2, ...]`. Each probability is an expression; at
/// evaluation time every weight must be non-negative and they must sum to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistExpr {
    pub arms: Vec<(Expr, Expr)>,
}

/// pGCL abstract syntax.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Program {
    Skip,
    Abort,
    /// Simultaneous assignment `x, y := e1, e2`; the single-variable form
    /// is the one-element case.
    Assign(Vec<(VarRef, Expr)>),
    /// Two or more statements in order.
    Seq(Vec<Program>),
    IfBool(Expr, Box<Program>, Box<Program>),
    /// `IF p THEN P ELSE Q` with numeric `p`: sugar for `P <p> Q`.
    IfProb(Expr, Box<Program>, Box<Program>),
    /// Boolean guard, or a numeric guard for a probabilistic loop.
    While(Expr, Box<Program>),
    ProbChoice(Expr, Box<Program>, Box<Program>),
    DemonChoice(Box<Program>, Box<Program>),
    /// `x :in e1 <p> e2`
    ProbAssign(VarRef, Expr, Expr, Expr),
    /// `x :in e1 |^| e2`
    DemonAssign(VarRef, Expr, Expr),
    ChooseFromSet(VarRef, Vec<Expr>),
    SuchThat(Vec<VarRef>, Expr),
    ChooseFromDist(VarRef, DistExpr),
    GuardedIf(Vec<(Expr, Program)>),
    Assert(Expr),
}

/// Natural-number variant for the almost-sure-termination rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariantSpec {
    pub variant: Expr,
    pub upper_bound: u64,
    pub epsilon: Rational,
}

impl Program {
    pub fn seq(parts: Vec<Program>) -> Program {
        let mut flat = Vec::with_capacity(parts.len());
        for p in parts {
            match p {
                Program::Seq(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => Program::Skip,
            1 => flat.pop().unwrap(),
            _ => Program::Seq(flat),
        }
    }

    pub fn is_loop_free(&self) -> bool {
        let mut free = true;
        self.visit(&mut |p| {
            if matches!(p, Program::While(..)) {
                free = false;
            }
        });
        free
    }

    /// First `WHILE` node in pre-order.
    pub fn first_loop(&self) -> Option<&Program> {
        match self {
            Program::While(..) => Some(self),
            Program::Seq(parts) => parts.iter().find_map(Program::first_loop),
            Program::IfBool(_, a, b) | Program::IfProb(_, a, b) | Program::ProbChoice(_, a, b) | Program::DemonChoice(a, b) => {
                a.first_loop().or_else(|| b.first_loop())
            }
            Program::GuardedIf(branches) => branches.iter().find_map(|(_, p)| p.first_loop()),
            _ => None,
        }
    }

    /// Boolean guards, assertions and such-that predicates, deduplicated,
    /// in order of first appearance.
    pub fn predicates(&self) -> Vec<Expr> {
        let mut out: Vec<Expr> = Vec::new();
        let mut push = |e: &Expr| {
            if e.is_boolean() && !out.contains(e) {
                out.push(e.clone());
            }
        };
        self.visit(&mut |p| match p {
            Program::IfBool(g, _, _) | Program::While(g, _) | Program::Assert(g) | Program::SuchThat(_, g) => push(g),
            Program::GuardedIf(branches) => branches.iter().for_each(|(g, _)| push(g)),
            _ => {}
        });
        out
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Program)) {
        f(self);
        match self {
            Program::Seq(parts) => parts.iter().for_each(|p| p.visit(f)),
            Program::IfBool(_, a, b) | Program::IfProb(_, a, b) | Program::ProbChoice(_, a, b) | Program::DemonChoice(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Program::While(_, body) => body.visit(f),
            Program::GuardedIf(branches) => branches.iter().for_each(|(_, p)| p.visit(f)),
            _ => {}
        }
    }

    /// Statements that print without surrounding parentheses as operands of
    /// `<p>` and `|^|`.
    fn is_simple(&self) -> bool {
        matches!(
            self,
            Program::Skip
                | Program::Abort
                | Program::Assign(_)
                | Program::Assert(_)
                | Program::ChooseFromSet(..)
                | Program::ChooseFromDist(..)
                | Program::While(..)
                | Program::GuardedIf(_)
        )
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Program::Skip => f.write_str("SKIP"),
            Program::Abort => f.write_str("ABORT"),
            Program::Assign(pairs) => {
                let vars: Vec<_> = pairs.iter().map(|(v, _)| v.name.to_string()).collect();
                let exprs: Vec<_> = pairs.iter().map(|(_, e)| arith(e)).collect();
                write!(f, "{} := {}", vars.join(", "), exprs.join(", "))
            }
            Program::Seq(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "\n{pad}")?;
                    }
                    p.write(f, indent)?;
                }
                Ok(())
            }
            Program::IfBool(g, a, b) | Program::IfProb(g, a, b) => {
                write!(f, "IF {g} THEN ")?;
                write_operand(f, a, indent)?;
                f.write_str(" ELSE ")?;
                write_operand(f, b, indent)
            }
            Program::While(g, body) => {
                write!(f, "WHILE {g} DO\n{pad}  ")?;
                body.write(f, indent + 1)?;
                write!(f, "\n{pad}OD")
            }
            Program::ProbChoice(p, a, b) => {
                write_operand(f, a, indent)?;
                write!(f, " <{}> ", arith(p))?;
                write_operand(f, b, indent)
            }
            Program::DemonChoice(a, b) => {
                write_operand(f, a, indent)?;
                f.write_str(" |^| ")?;
                write_operand(f, b, indent)
            }
            Program::ProbAssign(x, e1, p, e2) => {
                write!(f, "{} :in {} <{}> {}", x.name, arith(e1), arith(p), arith(e2))
            }
            Program::DemonAssign(x, e1, e2) => write!(f, "{} :in {} |^| {}", x.name, arith(e1), arith(e2)),
            Program::ChooseFromSet(x, set) => {
                let items: Vec<_> = set.iter().map(|e| e.to_string()).collect();
                write!(f, "{} :in {{{}}}", x.name, items.join(", "))
            }
            Program::SuchThat(xs, pred) => {
                let names: Vec<_> = xs.iter().map(|v| v.name.to_string()).collect();
                write!(f, "{} :suchthat {}", names.join(", "), pred)
            }
            Program::ChooseFromDist(x, dist) => {
                let arms: Vec<_> = dist.arms.iter().map(|(e, p)| format!("{}: {}", arith(e), arith(p))).collect();
                write!(f, "{} :dist [{}]", x.name, arms.join(", "))
            }
            Program::GuardedIf(branches) => {
                for (i, (g, body)) in branches.iter().enumerate() {
                    if i == 0 {
                        write!(f, "IF {g} -> ")?;
                    } else {
                        write!(f, "\n{pad}[] {g} -> ")?;
                    }
                    body.write(f, indent + 1)?;
                }
                write!(f, "\n{pad}FI")
            }
            Program::Assert(pred) => write!(f, "{{ {pred} }}"),
        }
    }
}

/// Expression in a position the parser reads at additive level: anything
/// looser than `+`/`-` needs parentheses.
fn arith(e: &Expr) -> String {
    let needs_parens = matches!(e, Expr::Bin(op, _, _) if op.is_comparison() || matches!(op, super::expr::BinOp::And | super::expr::BinOp::Or))
        || matches!(e, Expr::Bool(_) | Expr::Not(_));
    if needs_parens {
        format!("({e})")
    } else {
        e.to_string()
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, p: &Program, indent: usize) -> fmt::Result {
    if p.is_simple() {
        p.write(f, indent)
    } else {
        f.write_str("(")?;
        p.write(f, indent + 1)?;
        f.write_str(")")
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
