use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{Expectation, LoopConfig, WpError};
use crate::lang::{EvalError, Expr, Program, StateSpace, Value, VarRef};
use crate::rational::{is_probability, serialize_rational, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WpResult {
    pub pre: Expectation,
    /// Bound on the remaining fixpoint gap; zero when every loop was exact.
    #[serde(serialize_with = "serialize_rational")]
    pub loop_residual: Rational,
}

/// Computes `wp(program)(post)` over every state of `space`.
pub fn wp(program: &Program, post: &Expectation, space: &StateSpace, cfg: &LoopConfig) -> Result<WpResult, WpError> {
    WpEngine::new(program, space, cfg.clone()).wp(post)
}

pub(crate) type Fault = Arc<WpError>;
pub(crate) type Res<T> = Result<T, Fault>;
pub(crate) type Target = Res<usize>;

/// A state's outgoing behaviour for an atomic command: a demonic choice
/// among weighted lists of successor states. No options at all is abort.
pub(crate) type Options = Vec<Vec<(Rational, Target)>>;

pub(crate) enum Table {
    Kernel(Vec<Res<Options>>),
    Guard(Vec<Res<bool>>),
    Prob(Vec<Res<Rational>>),
    Guards(Vec<Res<Vec<bool>>>),
}

/// Per-node, per-state tables shared by the wp engine and the resolution
/// enumerator. Nodes are identified by address within one borrowed program.
pub(crate) struct Compiled<'a> {
    pub space: &'a StateSpace,
    rows: Vec<Vec<Value>>,
    tables: RefCell<HashMap<*const Program, Rc<Table>>>,
}

impl<'a> Compiled<'a> {
    pub fn new(space: &'a StateSpace) -> Self {
        let rows = (0..space.len()).map(|s| space.values_of(s)).collect();
        Self { space, rows, tables: RefCell::new(HashMap::new()) }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    fn fault(&self, s: usize, source: EvalError) -> Fault {
        Arc::new(WpError::Eval { state: self.space.describe(s), source })
    }

    fn num(&self, e: &Expr, s: usize) -> Res<Rational> {
        e.eval_num(&self.rows[s]).map_err(|err| self.fault(s, err))
    }

    pub fn boolean(&self, e: &Expr, s: usize) -> Res<bool> {
        e.eval_bool(&self.rows[s]).map_err(|err| self.fault(s, err))
    }

    fn prob(&self, e: &Expr, s: usize) -> Res<Rational> {
        let p = self.num(e, s)?;
        if is_probability(&p) {
            Ok(p)
        } else {
            Err(Arc::new(WpError::ProbabilityOutOfRange { state: self.space.describe(s), value: p.to_string() }))
        }
    }

    /// Successor of `s` after setting `var` to `value`.
    fn set(&self, s: usize, var: &VarRef, value: &Value) -> Target {
        match self.space.position(var.slot, value) {
            Some(pos) => Ok(self.space.with_position(s, var.slot, pos)),
            None => Err(Arc::new(WpError::OutOfDomain {
                state: self.space.describe(s),
                var: var.name.to_string(),
                value: value.to_string(),
            })),
        }
    }

    fn assign(&self, s: usize, var: &VarRef, e: &Expr) -> Target {
        let v = e.eval(&self.rows[s]).map_err(|err| self.fault(s, err))?;
        self.set(s, var, &v)
    }

    pub fn table(&self, node: &Program) -> Rc<Table> {
        let key = node as *const Program;
        if let Some(t) = self.tables.borrow().get(&key) {
            return t.clone();
        }
        let t = Rc::new(self.build(node));
        self.tables.borrow_mut().insert(key, t.clone());
        t
    }

    fn build(&self, node: &Program) -> Table {
        let n = self.len();
        let one = Rational::one;
        let kernel = |f: &dyn Fn(usize) -> Res<Options>| Table::Kernel((0..n).map(f).collect());
        match node {
            Program::Assign(pairs) => kernel(&|s| {
                let mut t = s;
                for (var, e) in pairs {
                    let v = e.eval(&self.rows[s]).map_err(|err| self.fault(s, err))?;
                    t = self.set(t, var, &v).map_err(|_| {
                        Arc::new(WpError::OutOfDomain {
                            state: self.space.describe(s),
                            var: var.name.to_string(),
                            value: v.to_string(),
                        })
                    })?;
                }
                Ok(vec![vec![(one(), Ok(t))]])
            }),
            Program::ProbAssign(x, e1, p, e2) => kernel(&|s| {
                let p = self.prob(p, s)?;
                let q = one() - &p;
                Ok(vec![vec![(p, self.assign(s, x, e1)), (q, self.assign(s, x, e2))]])
            }),
            Program::DemonAssign(x, e1, e2) => {
                kernel(&|s| Ok(vec![vec![(one(), self.assign(s, x, e1))], vec![(one(), self.assign(s, x, e2))]]))
            }
            Program::ChooseFromSet(x, set) => {
                kernel(&|s| Ok(set.iter().map(|e| vec![(one(), self.assign(s, x, e))]).collect()))
            }
            Program::SuchThat(vars, pred) => kernel(&|s| {
                let mut options = Vec::new();
                let sizes: Vec<usize> = vars.iter().map(|v| self.space.domains()[v.slot].len()).collect();
                let mut digits = vec![0usize; vars.len()];
                loop {
                    let mut t = s;
                    for (v, &d) in vars.iter().zip(&digits) {
                        t = self.space.with_position(t, v.slot, d);
                    }
                    if self.boolean(pred, t)? {
                        options.push(vec![(one(), Ok(t))]);
                    }
                    let mut i = vars.len();
                    loop {
                        if i == 0 {
                            return Ok(options);
                        }
                        i -= 1;
                        digits[i] += 1;
                        if digits[i] < sizes[i] {
                            break;
                        }
                        digits[i] = 0;
                    }
                }
            }),
            Program::ChooseFromDist(x, dist) => kernel(&|s| {
                let mut arms = Vec::with_capacity(dist.arms.len());
                let mut sum = Rational::zero();
                for (e, p) in &dist.arms {
                    let w = self.num(p, s)?;
                    if w.is_negative() {
                        return Err(Arc::new(WpError::ProbabilityOutOfRange {
                            state: self.space.describe(s),
                            value: w.to_string(),
                        }));
                    }
                    sum += &w;
                    arms.push((w, self.assign(s, x, e)));
                }
                if !sum.is_one() {
                    return Err(Arc::new(WpError::DistributionSum { state: self.space.describe(s), sum: sum.to_string() }));
                }
                Ok(vec![arms])
            }),
            Program::Assert(pred) => kernel(&|s| {
                Ok(if self.boolean(pred, s)? { vec![vec![(one(), Ok(s))]] } else { Vec::new() })
            }),
            Program::IfBool(g, _, _) => Table::Guard((0..n).map(|s| self.boolean(g, s)).collect()),
            Program::IfProb(p, _, _) | Program::ProbChoice(p, _, _) => Table::Prob((0..n).map(|s| self.prob(p, s)).collect()),
            Program::While(g, _) if g.is_boolean() => Table::Guard((0..n).map(|s| self.boolean(g, s)).collect()),
            Program::While(g, _) => Table::Prob((0..n).map(|s| self.prob(g, s)).collect()),
            Program::GuardedIf(branches) => Table::Guards(
                (0..n)
                    .map(|s| branches.iter().map(|(g, _)| self.boolean(g, s)).collect::<Res<Vec<bool>>>())
                    .collect(),
            ),
            Program::Skip | Program::Abort | Program::Seq(_) | Program::DemonChoice(..) => Table::Kernel(Vec::new()),
        }
    }
}

/// A value that may be poisoned by an error on some branch. Poison only
/// matters if the branch carries non-zero weight.
#[derive(Debug, Clone)]
enum Cell {
    Val(Rational),
    Fault(Fault),
}

fn weighted(terms: impl Iterator<Item = (Rational, Res<Rational>)>) -> Cell {
    let mut acc = Rational::zero();
    for (w, v) in terms {
        if w.is_zero() {
            continue;
        }
        match v {
            Ok(v) => acc += w * v,
            Err(f) => return Cell::Fault(f),
        }
    }
    Cell::Val(acc)
}

fn minimum(cells: impl Iterator<Item = Cell>) -> Cell {
    let mut best: Option<Rational> = None;
    for c in cells {
        match c {
            Cell::Val(v) => {
                if best.as_ref().is_none_or(|b| v < *b) {
                    best = Some(v);
                }
            }
            fault => return fault,
        }
    }
    Cell::Val(best.unwrap_or_else(Rational::zero))
}

fn value(cells: &[Cell], t: usize) -> Res<Rational> {
    match &cells[t] {
        Cell::Val(v) => Ok(v.clone()),
        Cell::Fault(f) => Err(f.clone()),
    }
}

/// Reusable wp evaluator for one program over one state space. Per-state
/// tables for each program node are built on first use and shared across
/// post-expectations.
pub struct WpEngine<'a> {
    program: &'a Program,
    cfg: LoopConfig,
    compiled: Compiled<'a>,
}

impl<'a> WpEngine<'a> {
    pub fn new(program: &'a Program, space: &'a StateSpace, cfg: LoopConfig) -> Self {
        Self { program, cfg, compiled: Compiled::new(space) }
    }

    pub fn space(&self) -> &StateSpace {
        self.compiled.space
    }

    pub fn wp(&self, post: &Expectation) -> Result<WpResult, WpError> {
        self.wp_of(self.program, post)
    }

    /// `wp` of a sub-program of the engine's program (or the program itself).
    pub fn wp_of(&self, node: &'a Program, post: &Expectation) -> Result<WpResult, WpError> {
        if post.len() != self.compiled.len() {
            return Err(WpError::WrongLength { expected: self.compiled.len(), got: post.len() });
        }
        let cells = post.values().iter().cloned().map(Cell::Val).collect();
        let (cells, residual) = self.eval(node, cells)?;
        let values = cells
            .into_iter()
            .map(|c| match c {
                Cell::Val(v) => Ok(v),
                Cell::Fault(f) => Err((*f).clone()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WpResult { pre: Expectation::from_values_unchecked(values), loop_residual: residual })
    }

    fn eval(&self, node: &Program, post: Vec<Cell>) -> Result<(Vec<Cell>, Rational), WpError> {
        let n = post.len();
        let zero = Rational::zero;
        Ok(match node {
            Program::Skip => (post, zero()),
            Program::Abort => (vec![Cell::Val(zero()); n], zero()),
            Program::Seq(parts) => {
                let mut cur = post;
                let mut residual = zero();
                for part in parts.iter().rev() {
                    let (next, r) = self.eval(part, cur)?;
                    cur = next;
                    residual += r;
                }
                (cur, residual)
            }
            Program::IfBool(_, a, b) => {
                let (wa, ra) = self.eval(a, post.clone())?;
                let (wb, rb) = self.eval(b, post)?;
                let Table::Guard(g) = &*self.compiled.table(node) else { unreachable!() };
                (select(g, &wa, &wb), ra.max(rb))
            }
            Program::IfProb(_, a, b) | Program::ProbChoice(_, a, b) => {
                let (wa, ra) = self.eval(a, post.clone())?;
                let (wb, rb) = self.eval(b, post)?;
                let Table::Prob(p) = &*self.compiled.table(node) else { unreachable!() };
                (mix(p, &wa, &wb), ra.max(rb))
            }
            Program::DemonChoice(a, b) => {
                let (wa, ra) = self.eval(a, post.clone())?;
                let (wb, rb) = self.eval(b, post)?;
                let cells = wa.into_iter().zip(wb).map(|(x, y)| minimum([x, y].into_iter())).collect();
                (cells, ra.max(rb))
            }
            Program::GuardedIf(branches) => {
                let mut bodies = Vec::with_capacity(branches.len());
                let mut residual = zero();
                for (_, body) in branches {
                    let (w, r) = self.eval(body, post.clone())?;
                    bodies.push(w);
                    residual = residual.max(r);
                }
                let Table::Guards(g) = &*self.compiled.table(node) else { unreachable!() };
                let cells = (0..n)
                    .map(|s| match &g[s] {
                        Err(f) => Cell::Fault(f.clone()),
                        Ok(enabled) => minimum(
                            enabled.iter().zip(&bodies).filter(|(on, _)| **on).map(|(_, w)| w[s].clone()),
                        ),
                    })
                    .collect();
                (cells, residual)
            }
            Program::While(_, body) => self.fixpoint(node, body, &post)?,
            _ => {
                let Table::Kernel(k) = &*self.compiled.table(node) else { unreachable!() };
                let cells = k
                    .iter()
                    .map(|opts| match opts {
                        Err(f) => Cell::Fault(f.clone()),
                        Ok(opts) => minimum(opts.iter().map(|arms| {
                            weighted(arms.iter().map(|(w, t)| {
                                (w.clone(), t.clone().and_then(|t| value(&post, t)))
                            }))
                        })),
                    })
                    .collect();
                (cells, zero())
            }
        })
    }

    /// Ascending Kleene iteration from the zero expectation.
    fn fixpoint(&self, node: &Program, body: &Program, post: &[Cell]) -> Result<(Vec<Cell>, Rational), WpError> {
        let n = post.len();
        let table = self.compiled.table(node);
        let mut x = vec![Cell::Val(Rational::zero()); n];
        let mut iteration = 0;
        loop {
            let (b, inner) = self.eval(body, x.clone())?;
            let next = match &*table {
                Table::Guard(g) => select(g, &b, post),
                Table::Prob(p) => mix(p, &b, post),
                _ => unreachable!(),
            };
            iteration += 1;
            let mut change = Rational::zero();
            let mut poisoned = false;
            for s in 0..n {
                match (&x[s], &next[s]) {
                    (Cell::Val(old), Cell::Val(new)) => {
                        if new < old {
                            return Err(WpError::ChainDescent { state: self.compiled.space.describe(s), iteration });
                        }
                        let d = new - old;
                        if d > change {
                            change = d;
                        }
                    }
                    (Cell::Fault(_), Cell::Fault(_)) => {}
                    _ => poisoned = true,
                }
            }
            x = next;
            if !poisoned {
                if change.is_zero() {
                    return Ok((x, inner));
                }
                if change < self.cfg.tolerance {
                    return Ok((x, change + inner));
                }
            }
            if iteration >= self.cfg.max_iters {
                return Err(WpError::Inconclusive { iterations: iteration, change: change.to_string() });
            }
        }
    }
}

fn select(guard: &[Res<bool>], a: &[Cell], b: &[Cell]) -> Vec<Cell> {
    guard
        .iter()
        .enumerate()
        .map(|(s, g)| match g {
            Ok(true) => a[s].clone(),
            Ok(false) => b[s].clone(),
            Err(f) => Cell::Fault(f.clone()),
        })
        .collect()
}

fn mix(p: &[Res<Rational>], a: &[Cell], b: &[Cell]) -> Vec<Cell> {
    p.iter()
        .enumerate()
        .map(|(s, p)| match p {
            Ok(p) => weighted([(p.clone(), value(a, s)), (Rational::one() - p, value(b, s))].into_iter()),
            Err(f) => Cell::Fault(f.clone()),
        })
        .collect()
}
