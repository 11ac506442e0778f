use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::{One, Zero};

use super::engine::{Compiled, Table};
use super::{Expectation, WpError};
use crate::lang::{Program, StateSpace};
use crate::rational::Rational;

/// Default cap on the number of resolutions from any one initial state.
pub const RESOLUTION_BOUND: usize = 1_000_000;

/// Output sub-distribution over final states; missing mass is abort.
pub type Dist = BTreeMap<usize, Rational>;

#[derive(Debug, Clone, PartialEq)]
pub struct StateResolutions {
    pub state: usize,
    /// One output per way of resolving the demonic choices met from `state`.
    pub outputs: Vec<Dist>,
}

/// Every demonic resolution of a loop-free program, per initial state.
/// Choices are resolved independently at each state where they are met, so
/// the resolutions from different initial states combine freely.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolutions {
    pub per_state: Vec<StateResolutions>,
}

impl Resolutions {
    pub fn count(&self) -> usize {
        self.per_state.iter().map(|r| r.outputs.len()).sum()
    }

    /// The same resolutions with repeated output distributions removed.
    pub fn distinct(&self) -> Resolutions {
        let per_state = self
            .per_state
            .iter()
            .map(|r| {
                let mut outputs: Vec<Dist> = Vec::new();
                for d in &r.outputs {
                    if !outputs.contains(d) {
                        outputs.push(d.clone());
                    }
                }
                StateResolutions { state: r.state, outputs }
            })
            .collect();
        Resolutions { per_state }
    }

    /// Least expected value of `f` over the resolutions from each state.
    pub fn lower_envelope(&self, f: &Expectation) -> Vec<Rational> {
        self.per_state
            .iter()
            .map(|r| r.outputs.iter().map(|d| expected(d, f)).min().unwrap_or_else(Rational::zero))
            .collect()
    }
}

pub fn expected(d: &Dist, f: &Expectation) -> Rational {
    d.iter().map(|(t, w)| w * f.get(*t)).sum()
}

pub fn enumerate_resolutions(program: &Program, space: &StateSpace) -> Result<Resolutions, WpError> {
    enumerate_resolutions_bounded(program, space, RESOLUTION_BOUND)
}

pub fn enumerate_resolutions_bounded(program: &Program, space: &StateSpace, bound: usize) -> Result<Resolutions, WpError> {
    if !program.is_loop_free() {
        return Err(WpError::NotLoopFree);
    }
    let r = Resolver { compiled: Compiled::new(space), bound, memo: RefCell::new(HashMap::new()) };
    let per_state = (0..space.len())
        .map(|s| Ok(StateResolutions { state: s, outputs: r.outputs(program, s)?.as_ref().clone() }))
        .collect::<Result<_, WpError>>()?;
    Ok(Resolutions { per_state })
}

/// Resolutions already computed, keyed by program node and initial state.
type Memo = RefCell<HashMap<(*const Program, usize), Rc<Vec<Dist>>>>;

struct Resolver<'a> {
    compiled: Compiled<'a>,
    bound: usize,
    memo: Memo,
}

fn point(s: usize) -> Dist {
    BTreeMap::from([(s, Rational::one())])
}

fn add_scaled(acc: &mut Dist, d: &Dist, w: &Rational) {
    for (t, v) in d {
        *acc.entry(*t).or_insert_with(Rational::zero) += w * v;
    }
}

impl<'a> Resolver<'a> {
    fn outputs(&self, node: &Program, s: usize) -> Result<Rc<Vec<Dist>>, WpError> {
        let key = (node as *const Program, s);
        if let Some(v) = self.memo.borrow().get(&key) {
            return Ok(v.clone());
        }
        let v = Rc::new(self.compute(node, s)?);
        if v.len() > self.bound {
            return Err(WpError::ResolutionBound(self.bound));
        }
        self.memo.borrow_mut().insert(key, v.clone());
        Ok(v)
    }

    fn compute(&self, node: &Program, s: usize) -> Result<Vec<Dist>, WpError> {
        let fault = |f: &std::sync::Arc<WpError>| (**f).clone();
        Ok(match node {
            Program::Skip => vec![point(s)],
            Program::Abort => vec![Dist::new()],
            Program::While(..) => return Err(WpError::NotLoopFree),
            Program::Seq(parts) => {
                let mut cur = vec![point(s)];
                for part in parts {
                    let mut next = Vec::new();
                    for d in &cur {
                        next.extend(self.follow(d, part)?);
                        if next.len() > self.bound {
                            return Err(WpError::ResolutionBound(self.bound));
                        }
                    }
                    cur = next;
                }
                cur
            }
            Program::IfBool(_, a, b) => {
                let Table::Guard(g) = &*self.compiled.table(node) else { unreachable!() };
                let branch = if *g[s].as_ref().map_err(fault)? { a } else { b };
                self.outputs(branch, s)?.as_ref().clone()
            }
            Program::IfProb(_, a, b) | Program::ProbChoice(_, a, b) => {
                let Table::Prob(p) = &*self.compiled.table(node) else { unreachable!() };
                let p = p[s].as_ref().map_err(fault)?;
                let q = Rational::one() - p;
                if q.is_zero() {
                    return Ok(self.outputs(a, s)?.as_ref().clone());
                }
                if p.is_zero() {
                    return Ok(self.outputs(b, s)?.as_ref().clone());
                }
                let (oa, ob) = (self.outputs(a, s)?, self.outputs(b, s)?);
                if oa.len().saturating_mul(ob.len()) > self.bound {
                    return Err(WpError::ResolutionBound(self.bound));
                }
                let mut out = Vec::with_capacity(oa.len() * ob.len());
                for da in oa.iter() {
                    for db in ob.iter() {
                        let mut d = Dist::new();
                        add_scaled(&mut d, da, p);
                        add_scaled(&mut d, db, &q);
                        out.push(d);
                    }
                }
                out
            }
            Program::DemonChoice(a, b) => {
                let mut out = self.outputs(a, s)?.as_ref().clone();
                out.extend(self.outputs(b, s)?.iter().cloned());
                out
            }
            Program::GuardedIf(branches) => {
                let Table::Guards(g) = &*self.compiled.table(node) else { unreachable!() };
                let enabled = g[s].as_ref().map_err(fault)?;
                let mut out = Vec::new();
                for ((_, body), on) in branches.iter().zip(enabled) {
                    if *on {
                        out.extend(self.outputs(body, s)?.iter().cloned());
                    }
                }
                if out.is_empty() {
                    out.push(Dist::new());
                }
                out
            }
            _ => {
                let Table::Kernel(k) = &*self.compiled.table(node) else { unreachable!() };
                let options = k[s].as_ref().map_err(fault)?;
                if options.is_empty() {
                    return Ok(vec![Dist::new()]);
                }
                let mut out = Vec::with_capacity(options.len());
                for arms in options {
                    let mut d = Dist::new();
                    for (w, t) in arms {
                        if !w.is_zero() {
                            let t = t.as_ref().map_err(fault)?;
                            *d.entry(*t).or_insert_with(Rational::zero) += w;
                        }
                    }
                    out.push(d);
                }
                out
            }
        })
    }

    /// Runs `part` from every state in the support of `d`, choosing a
    /// resolution independently at each.
    fn follow(&self, d: &Dist, part: &Program) -> Result<Vec<Dist>, WpError> {
        let mut acc = vec![Dist::new()];
        for (t, w) in d {
            let outs = self.outputs(part, *t)?;
            if acc.len().saturating_mul(outs.len()) > self.bound {
                return Err(WpError::ResolutionBound(self.bound));
            }
            let mut next = Vec::with_capacity(acc.len() * outs.len());
            for a in &acc {
                for o in outs.iter() {
                    let mut m = a.clone();
                    add_scaled(&mut m, o, w);
                    next.push(m);
                }
            }
            acc = next;
        }
        Ok(acc)
    }
}
