//! Exact weakest pre-expectation semantics for pGCL over finite state
//! spaces, fair-coin samplers for discrete distributions, and exact
//! analysis of the state machines those samplers induce.

pub mod lang;
pub mod machine;
pub mod rational;
pub mod sampler;
pub mod wp;

pub use lang::{parse, parse_source, Expr, LangError, Program, State, StateSpace, Value, VarDomain, VariantSpec};
pub use rational::Rational;
pub use sampler::{sample_binary, sample_discrete, run_trials, BitSource, CumulativeDist, SampleTrace, SamplerError, ScriptedBits, SeededBits, TrialReport, WeightedDist};
pub use machine::{analyze, build_machine, load_machine, to_dot, Machine, MachineAnalysis, MachineError};
