#![allow(dead_code)]

pub mod gen;

use std::path::PathBuf;

use num_traits::{One, Zero};
use pgcl::lang::{parse_source, Params, Source};
use pgcl::rational::{int, rat, Rational};
use pgcl::wp::{enumerate_resolutions, wp, Expectation, LoopConfig};
use pgcl::{Program, StateSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GRID8: &str = "{0, 1/8, 1/4, 3/8, 1/2, 5/8, 3/4, 7/8, 1}";
pub const THIRDS: &str = "{0, 1/3, 2/3, 1}";

pub fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

pub fn source(text: &str) -> Source {
    source_with(text, &Params::new())
}

pub fn source_with(text: &str, params: &Params) -> Source {
    parse_source(text, params).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

pub fn with_param(name: &str, value: &Rational) -> Params {
    let mut p = Params::new();
    p.insert(name.to_string(), value.clone());
    p
}

pub fn twocoins() -> String {
    "var c1 in {H, T}\nvar c2 in {H, T}\nc1 := H <1/2> c1 := T; c2 := H <1/2> c2 := T".into()
}

pub fn mixed_coins() -> String {
    "var c1 in {H, T}\nvar c2 in {H, T}\nc1 := H <p> c1 := T; c2 := H <1/2> c2 := T".into()
}

pub fn demon_after() -> String {
    "var c1 in {H, T}\nvar c2 in {H, T}\nc1 := H <p> c1 := T; c2 := H |^| c2 := T".into()
}

pub fn demon_before() -> String {
    "var c1 in {H, T}\nvar c2 in {H, T}\nc2 := H |^| c2 := T; c1 := H <p> c1 := T".into()
}

pub fn assignment_example() -> String {
    "var x in {-2..9}\nvar y in {0..3}\n{0 <= x & x <= 3}; x := 1 - y <1/3> x := 3 * x".into()
}

const SPLIT_P: &str = "IF p <= 1/2 -> q, r := 0, 2*p [] p >= 1/2 -> q, r := 2*p - 1, 1 FI";

fn pqrx(grid: &str, p_is_var: bool) -> String {
    let p = if p_is_var { format!("var p in {grid}\n") } else { String::new() };
    format!("var x in {{0, 1}}\n{p}var q in {grid}\nvar r in {grid}\n")
}

/// `x :in 1 <p> 0`.
pub fn spec_choice(grid: &str, p_is_var: bool) -> String {
    format!("{}x :in 1 <p> 0", pqrx(grid, p_is_var))
}

/// Split `p` into `q`, `r`, then a fair coin between the two halves.
pub fn split_then_flip(grid: &str, p_is_var: bool) -> String {
    format!("{}{SPLIT_P};\n(x :in 1 <q> 0) <1/2> (x :in 1 <r> 0)", pqrx(grid, p_is_var))
}

/// One unrolled step: split, then move `p` by a fair coin.
pub fn one_step(grid: &str) -> String {
    format!("{}{SPLIT_P};\np :in q <1/2> r", pqrx(grid, true))
}

/// The loop, the exit assertion and the final biased choice.
pub fn loop_then_choice(grid: &str) -> String {
    format!("{}WHILE 0 < p & p < 1 DO {SPLIT_P}; p :in q <1/2> r OD;\n{{p = 0 | p = 1}};\nx :in 1 <p> 0", pqrx(grid, true))
}

/// The loop followed by `x := p`.
pub fn loop_then_assign(grid: &str) -> String {
    format!("{}WHILE 0 < p & p < 1 DO {SPLIT_P}; p :in q <1/2> r OD;\nx := p", pqrx(grid, true))
}

/// `x` starts at `p` and the loop moves `x` directly.
pub fn optimised_loop(grid: &str) -> String {
    format!(
        "var x in {grid}\nvar q in {grid}\nvar r in {grid}\nx := p;\n\
         WHILE 0 < x & x < 1 DO IF x <= 1/2 -> q, r := 0, 2*x [] x >= 1/2 -> q, r := 2*x - 1, 1 FI; x :in q <1/2> r OD"
    )
}

/// Scalar rendering of the distribution split: `d` stands for `1 <d> 0`.
pub fn split_spec(grid: &str) -> String {
    format!("var d in {grid}\nvar d0 in {grid}\nvar d1 in {grid}\n{{0 < d & d < 1}};\nd0, d1 :suchthat d = (d0 + d1) / 2")
}

/// The split strengthened so one half has strictly smaller support.
pub fn split_decreasing(grid: &str) -> String {
    format!(
        "var d in {grid}\nvar d0 in {grid}\nvar d1 in {grid}\n{{0 < d & d < 1}};\n\
         d0, d1 :suchthat d = (d0 + d1) / 2 & ([0 < d0 & d0 < 1] < [0 < d & d < 1] | [0 < d1 & d1 < 1] < [0 < d & d < 1])"
    )
}

pub fn coin_loop() -> String {
    "var c in {H, T}\nc := H; WHILE c = H DO c :in H <1/2> T OD".into()
}

pub fn spin() -> String {
    "var c in {H, T}\nWHILE true DO SKIP OD".into()
}

pub fn geometric() -> String {
    "var n in {0..4}\nWHILE n < 4 DO n := n + 1 <1/2> SKIP OD".into()
}

pub fn abstractions() -> String {
    "var x in {0..3}\nvar y in {0..3}\nx :in {1, 2}; y :suchthat y >= x; x :dist [0: 1/4, 1: 1/4, 3: 1/2] |^| SKIP".into()
}

pub fn demonic_loop() -> String {
    "var n in {0..3}\nvar c in {H, T}\nWHILE n < 3 DO (n := n + 1 |^| c := T); c :in H <1/3> T; IF c = H THEN n := 0 OD".into()
}

/// Every corpus program with a parameter value fixed, for the invariant
/// sweeps. All spaces are below 10^4 states.
pub fn corpus() -> Vec<(&'static str, Source)> {
    let p38 = with_param("p", &rat(3, 8));
    let p13 = with_param("p", &rat(1, 3));
    vec![
        ("two coins", source(&twocoins())),
        ("mixed coins", source_with(&mixed_coins(), &p38)),
        ("demon after", source_with(&demon_after(), &p13)),
        ("demon before", source_with(&demon_before(), &p13)),
        ("assignment", source(&assignment_example())),
        ("spec choice", source(&spec_choice(GRID8, true))),
        ("split then flip", source(&split_then_flip(GRID8, true))),
        ("one step", source(&one_step(GRID8))),
        ("loop then choice", source(&loop_then_choice(THIRDS))),
        ("loop then assign", source(&loop_then_assign(GRID8))),
        ("optimised loop", source_with(&optimised_loop(GRID8), &p38)),
        ("split spec", source(&split_spec("{0, 1/4, 1/2, 3/4, 1}"))),
        ("split decreasing", source(&split_decreasing("{0, 1/4, 1/2, 3/4, 1}"))),
        ("coin loop", source(&coin_loop())),
        ("spin", source(&spin())),
        ("geometric", source(&geometric())),
        ("abstractions", source(&abstractions())),
        ("demonic loop", source(&demonic_loop())),
    ]
}

/// Seeded expectations valued in `{0, 1/4, ..., 3}`, plus two indicators.
pub fn test_posts(space: &StateSpace, seed: u64, count: usize) -> Vec<Expectation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Expectation> = (0..count)
        .map(|_| {
            let vals = (0..space.len()).map(|_| rat(rng.random_range(0..=12), 4)).collect();
            Expectation::new(space, vals).unwrap()
        })
        .collect();
    out.push(Expectation::indicator(space, |s| s == 0));
    out.push(Expectation::indicator(space, |s| s + 1 == space.len()));
    out
}

fn pointwise_sum(a: &Expectation, b: &Expectation, space: &StateSpace) -> Expectation {
    Expectation::new(space, a.values().iter().zip(b.values()).map(|(x, y)| x + y).collect()).unwrap()
}

/// Monotonicity, feasibility and scaling for one program and post pair,
/// checked at every state. Returns a description of the first breach.
pub fn check_healthiness(program: &Program, space: &StateSpace, f: &Expectation, g: &Expectation) -> Result<(), String> {
    let cfg = LoopConfig::default();
    let run = |e: &Expectation| wp(program, e, space, &cfg).map_err(|err| err.to_string());
    let wf = run(f)?;
    let bigger = pointwise_sum(f, g, space);
    let wb = run(&bigger)?;
    let slack = &wf.loop_residual + &wb.loop_residual;
    for s in 0..space.len() {
        if wf.pre.get(s) > &(wb.pre.get(s) + &slack) {
            return Err(format!("monotonicity at state ({})", space.describe(s)));
        }
        if wf.pre.get(s) > &(f.max() + &wf.loop_residual) {
            return Err(format!("feasibility at state ({})", space.describe(s)));
        }
    }
    for c in [rat(1, 2), int(3)] {
        let ws = run(&f.scale(&c))?;
        let tol = &ws.loop_residual + &c * &wf.loop_residual;
        for s in 0..space.len() {
            let diff = ws.pre.get(s) - &c * wf.pre.get(s);
            if diff > tol || -diff > tol {
                return Err(format!("scaling by {c} at state ({})", space.describe(s)));
            }
        }
    }
    Ok(())
}

/// `W_0 = ABORT`, `W_{k+1} = IF g THEN body; W_k ELSE SKIP`.
pub fn unroll(program: &Program, k: usize) -> Option<Program> {
    let Program::While(guard, body) = program else { return None };
    let mut w = Program::Abort;
    for _ in 0..k {
        w = Program::IfBool(guard.clone(), Box::new(Program::seq(vec![(**body).clone(), w])), Box::new(Program::Skip));
    }
    Some(w)
}

/// The unrolled approximations rise monotonically towards the loop's wp.
pub fn check_chain_ascent(program: &Program, space: &StateSpace, f: &Expectation, depth: usize) -> Result<(), String> {
    let Some(looped) = program.first_loop() else { return Ok(()) };
    let cfg = LoopConfig::default();
    let limit = wp(looped, f, space, &cfg).map_err(|e| e.to_string())?;
    let mut prev = Expectation::zero(space);
    for k in 1..=depth {
        let w = unroll(looped, k).expect("first_loop is a loop");
        let cur = wp(&w, f, space, &cfg).map_err(|e| e.to_string())?.pre;
        if !prev.le(&cur) {
            return Err(format!("approximation {k} is below approximation {}", k - 1));
        }
        for s in 0..space.len() {
            if cur.get(s) > &(limit.pre.get(s) + &limit.loop_residual) {
                return Err(format!("approximation {k} exceeds the fixpoint at state ({})", space.describe(s)));
            }
        }
        prev = cur;
    }
    Ok(())
}

/// For loop-free programs the least expected value over enumerated
/// resolutions equals wp at every state.
pub fn check_resolution_agreement(program: &Program, space: &StateSpace, posts: &[Expectation]) -> Result<(), String> {
    if !program.is_loop_free() {
        return Ok(());
    }
    let res = enumerate_resolutions(program, space).map_err(|e| e.to_string())?;
    for f in posts {
        let pre = wp(program, f, space, &LoopConfig::default()).map_err(|e| e.to_string())?.pre;
        if res.lower_envelope(f) != pre.values() {
            return Err("lower envelope of resolutions differs from wp".into());
        }
    }
    Ok(())
}

pub fn half() -> Rational {
    rat(1, 2)
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}
