mod input;

use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_traits::Zero;
use serde_json::{json, Value as Json};

use pgcl::lang::{parse, Params, StateSpace};
use pgcl::machine::{crosscheck, to_text, DEFAULT_MAX_NODES};
use pgcl::rational::{format_rational, pow2_neg, to_f64, Rational};
use pgcl::sampler::stats::goodness_of_fit;
use pgcl::wp::{
    check_equal, check_equal_on, check_refines, check_refines_on, check_variant, check_variant_from, sweep, wp, Expectation,
    LoopConfig, ProbeFamily, Status, Verdict, WpError,
};
use pgcl::{
    analyze, build_machine, load_machine, run_trials, sample_binary, sample_discrete, to_dot, BitSource, Machine, ScriptedBits,
    SeededBits, VariantSpec,
};

#[derive(Parser)]
#[command(name = "pgcl", version, about = "Exact wp reasoning for pGCL and fair-coin samplers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the weakest pre-expectation of a program for a post-expectation.
    Wp(WpArgs),
    /// Check that two programs have equal pre-expectations on every probe.
    CheckEqual(CompareArgs),
    /// Check that the left program is refined by the right one.
    CheckRefines(CompareArgs),
    /// Check the probabilistic variant rule for a program's first loop.
    CheckVariant(VariantArgs),
    /// Draw samples from a discrete distribution or a binary bias.
    Sample(SampleArgs),
    /// Run seeded trials of the discrete sampler and report frequencies.
    Trials(TrialsArgs),
    /// Extract the sampler's state machine for a distribution.
    MachineBuild(MachineArgs),
    /// Compute exact outcome probabilities and expected flips of a machine.
    MachineAnalyze(MachineArgs),
    /// Render a machine as Graphviz DOT.
    MachineDot(DotArgs),
}

#[derive(Args)]
struct Common {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Args)]
struct LoopArgs {
    /// Iteration budget for each loop fixpoint.
    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,
    /// Stopping tolerance for loop fixpoints; defaults to 2^-40.
    #[arg(long)]
    residual: Option<String>,
    /// Parameter override, `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    params: Vec<String>,
}

impl LoopArgs {
    fn config(&self) -> Result<LoopConfig> {
        let tolerance = match &self.residual {
            Some(r) => input::rational(r)?,
            None => pow2_neg(40),
        };
        if tolerance <= Rational::zero() {
            bail!("--residual must be positive");
        }
        Ok(LoopConfig { max_iters: self.max_iters, tolerance })
    }
}

#[derive(Args)]
struct WpArgs {
    /// Program file with `var`/`param` header, or `-` for standard input.
    #[arg(long)]
    program: String,
    /// Post-expectation; a boolean expression is read as its indicator.
    #[arg(long)]
    post: String,
    #[command(flatten)]
    looping: LoopArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareArgs {
    /// Left program (the specification, for refinement).
    #[arg(long, visible_alias = "spec")]
    left: String,
    /// Right program (the implementation, for refinement).
    #[arg(long, visible_alias = "impl")]
    right: String,
    /// Comma-separated variables the probes may observe; default all.
    #[arg(long)]
    observe: Option<String>,
    /// Only compare from initial states satisfying this predicate.
    #[arg(long)]
    initial: Option<String>,
    /// Sweep a parameter: `p=dyadic`, `p=uniform:N` or `p=a,b,c`.
    #[arg(long)]
    grid: Option<String>,
    /// Seed for the random probes.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    looping: LoopArgs,
    #[command(flatten)]
    common: Common,
    #[arg(skip)]
    refines: bool,
}

#[derive(Args)]
struct VariantArgs {
    #[arg(long)]
    program: String,
    /// Natural-valued variant expression.
    #[arg(long)]
    variant: String,
    /// Upper bound on the variant over guard states.
    #[arg(long)]
    bound: u64,
    /// Least probability of decrease per iteration.
    #[arg(long)]
    epsilon: String,
    /// Restrict to guard states reachable from states satisfying this.
    #[arg(long)]
    initial: Option<String>,
    #[command(flatten)]
    looping: LoopArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SampleArgs {
    /// Weights inline or a trial file.
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    dist: Option<String>,
    /// Bias of the binary sampler.
    #[arg(long)]
    p: Option<String>,
    /// Scripted bits such as `0110`; otherwise bits come from `--seed`.
    #[arg(long)]
    bits: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of samples.
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TrialsArgs {
    /// Trial file (run count, then weights) or inline weights.
    #[arg(long)]
    dist: String,
    /// Run count; overrides the file's.
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also compare against the exact machine analysis.
    #[arg(long)]
    crosscheck: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct MachineSource {
    /// Distribution to extract a machine from.
    #[arg(long, conflicts_with = "machine", required_unless_present = "machine")]
    dist: Option<String>,
    /// Machine file to load instead.
    #[arg(long)]
    machine: Option<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_NODES)]
    max_nodes: usize,
}

impl MachineSource {
    fn load(&self) -> Result<Machine> {
        if let Some(path) = &self.machine {
            let loaded = load_machine(&input::read_text(path)?).with_context(|| format!("loading {path}"))?;
            for w in &loaded.warnings {
                eprintln!("warning: {w}");
            }
            return Ok(loaded.machine);
        }
        let d = input::dist(self.dist.as_deref().expect("clap requires one source"))?;
        if self.max_nodes == 0 {
            bail!("--max-nodes must be at least 1");
        }
        Ok(build_machine(&d.dist, self.max_nodes)?)
    }
}

#[derive(Args)]
struct MachineArgs {
    #[command(flatten)]
    source: MachineSource,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DotArgs {
    #[command(flatten)]
    source: MachineSource,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<String>,
    #[command(flatten)]
    common: Common,
}

/// Result category, mapped to the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Outcome {
    Ok,
    Inconclusive,
    Fails,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::Fails => 1,
            Outcome::Inconclusive => 3,
        }
    }

    fn of(status: Status) -> Self {
        match status {
            Status::Holds => Outcome::Ok,
            Status::Fails => Outcome::Fails,
            Status::Inconclusive => Outcome::Inconclusive,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(outcome) => ExitCode::from(outcome.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            let inconclusive = e.chain().any(|c| matches!(c.downcast_ref::<WpError>(), Some(WpError::Inconclusive { .. })));
            ExitCode::from(if inconclusive { 3 } else { 2 })
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Wp(a) => cmd_wp(a),
        Command::CheckEqual(a) => cmd_compare(a, false),
        Command::CheckRefines(a) => cmd_compare(a, true),
        Command::CheckVariant(a) => cmd_variant(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Trials(a) => cmd_trials(a),
        Command::MachineBuild(a) => cmd_machine_build(a),
        Command::MachineAnalyze(a) => cmd_machine_analyze(a),
        Command::MachineDot(a) => cmd_machine_dot(a),
    }
}

fn print_json(v: &Json) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn cmd_wp(a: WpArgs) -> Result<Outcome> {
    let cfg = a.looping.config()?;
    let src = input::load_source(&a.program, &input::params(&a.looping.params)?)?;
    let post_expr = input::expr(&a.post, &src.space, &src.params)?;
    let post = Expectation::from_expr(&src.space, &post_expr)?;
    let r = wp(&src.program, &post, &src.space, &cfg)?;
    let constant = r.pre.as_constant();
    if a.common.json {
        let map: serde_json::Map<String, Json> = (0..src.space.len())
            .map(|s| (src.space.describe(s), Json::from(format_rational(r.pre.get(s)))))
            .collect();
        print_json(&json!({
            "pre": map,
            "constant": constant.map(format_rational),
            "loop_residual": format_rational(&r.loop_residual),
        }));
    } else {
        if let Some(c) = &constant {
            println!("constant {}", format_rational(c));
        }
        for s in 0..src.space.len() {
            println!("{}: {}", src.space.describe(s), format_rational(r.pre.get(s)));
        }
        if !r.loop_residual.is_zero() {
            println!("loop residual {}", format_rational(&r.loop_residual));
        }
    }
    Ok(Outcome::Ok)
}

fn compare_once(a: &CompareArgs, params: &Params, cfg: &LoopConfig) -> Result<Verdict> {
    let left = input::load_source(&a.left, params)?;
    let right = input::load_source(&a.right, params)?;
    let (space, lp, rp) = if left.space.domains() == right.space.domains() {
        (left.space, left.program, right.program)
    } else {
        let space = merged_space(&left.space, &right.space).with_context(|| format!("combining {} and {}", a.left, a.right))?;
        let lp = parse(&left.program.to_string(), &space)?;
        let rp = parse(&right.program.to_string(), &space)?;
        (space, lp, rp)
    };
    let params = left.params;
    let probes = match &a.observe {
        Some(list) => ProbeFamily::observing(&space, &[&lp, &rp], &input::observables(list, &space)?, a.seed),
        None => ProbeFamily::standard(&space, &[&lp, &rp], a.seed),
    };
    let initial = a.initial.as_deref().map(|t| input::expr(t, &space, &params)).transpose()?;
    Ok(match (a.refines, &initial) {
        (false, None) => check_equal(&lp, &rp, &probes, &space, cfg)?,
        (false, Some(i)) => check_equal_on(&lp, &rp, &probes, &space, cfg, i)?,
        (true, None) => check_refines(&lp, &rp, &probes, &space, cfg)?,
        (true, Some(i)) => check_refines_on(&lp, &rp, &probes, &space, cfg, i)?,
    })
}

/// Union of two declarations; a name declared in both must have the same domain.
fn merged_space(a: &StateSpace, b: &StateSpace) -> Result<StateSpace> {
    let mut domains = a.domains().to_vec();
    for d in b.domains() {
        match a.var_index(d.name()) {
            Some(i) if &a.domains()[i] != d => bail!("variable `{}` has different domains", d.name()),
            Some(_) => {}
            None => domains.push(d.clone()),
        }
    }
    Ok(StateSpace::new(domains)?)
}

fn verdict_lines(v: &Verdict) -> Vec<String> {
    let mut out = vec![format!("{:?}", v.status).to_lowercase()];
    if let Some(cx) = &v.counterexample {
        out.push(format!("  probe {} at state ({}): {} vs {}", cx.probe, cx.state, format_rational(&cx.lhs), format_rational(&cx.rhs)));
    }
    if !v.residual.is_zero() {
        out.push(format!("  residual {}", format_rational(&v.residual)));
    }
    if let Some(n) = &v.note {
        out.push(format!("  {n}"));
    }
    out
}

fn cmd_compare(mut a: CompareArgs, refines: bool) -> Result<Outcome> {
    a.refines = refines;
    let cfg = a.looping.config()?;
    let base = input::params(&a.looping.params)?;
    let Some(spec) = &a.grid else {
        let v = compare_once(&a, &base, &cfg)?;
        if a.common.json {
            print_json(&serde_json::to_value(&v)?);
        } else {
            verdict_lines(&v).iter().for_each(|l| println!("{l}"));
        }
        return Ok(Outcome::of(v.status));
    };
    if a.left == "-" || a.right == "-" {
        bail!("--grid needs both programs as files");
    }
    let (name, values) = input::grid(spec)?;
    let results = sweep(&values, |value| {
        let mut params = base.clone();
        params.insert(name.clone(), value.clone());
        compare_once(&a, &params, &cfg).map_err(|e| format!("{e:#}"))
    });
    let mut worst = Outcome::Ok;
    let mut rows = Vec::new();
    for (value, r) in &results {
        let v = r.as_ref().map_err(|e| anyhow!("{name} = {}: {e}", format_rational(value)))?;
        worst = worst.max(Outcome::of(v.status));
        if a.common.json {
            rows.push(json!({ "param": name, "value": format_rational(value), "verdict": v }));
        } else {
            let lines = verdict_lines(v);
            println!("{name} = {}: {}", format_rational(value), lines[0]);
            lines[1..].iter().for_each(|l| println!("{l}"));
        }
    }
    if a.common.json {
        print_json(&Json::Array(rows));
    }
    Ok(worst)
}

fn cmd_variant(a: VariantArgs) -> Result<Outcome> {
    let cfg = a.looping.config()?;
    let src = input::load_source(&a.program, &input::params(&a.looping.params)?)?;
    let looped = src.program.first_loop().ok_or_else(|| anyhow!("{} contains no loop", a.program))?;
    let spec = VariantSpec {
        variant: input::expr(&a.variant, &src.space, &src.params)?,
        upper_bound: a.bound,
        epsilon: input::rational(&a.epsilon)?,
    };
    let v = match &a.initial {
        Some(t) => check_variant_from(looped, &spec, &src.space, &cfg, &input::expr(t, &src.space, &src.params)?)?,
        None => check_variant(looped, &spec, &src.space, &cfg)?,
    };
    if a.common.json {
        print_json(&serde_json::to_value(&v)?);
    } else {
        verdict_lines(&v).iter().for_each(|l| println!("{l}"));
    }
    Ok(Outcome::of(v.status))
}

fn cmd_sample(a: SampleArgs) -> Result<Outcome> {
    let mut bits: Box<dyn BitSource> = match &a.bits {
        Some(b) => Box::new(ScriptedBits::parse(b)?),
        None => Box::new(SeededBits::new(a.seed)),
    };
    let count = if a.bits.is_some() { 1 } else { a.count };
    let dist = a.dist.as_deref().map(input::dist).transpose()?;
    let p = a.p.as_deref().map(input::rational).transpose()?;
    let mut traces = Vec::new();
    for _ in 0..count {
        let t = match (&dist, &p) {
            (Some(d), _) => sample_discrete(&d.dist, bits.as_mut())?,
            (None, Some(p)) => sample_binary(p, bits.as_mut())?,
            (None, None) => unreachable!("clap requires --dist or --p"),
        };
        traces.push(t);
    }
    if a.common.json {
        print_json(&serde_json::to_value(&traces)?);
    } else {
        for t in &traces {
            let bits: String = t.bits.iter().map(|b| char::from(b'0' + b)).collect();
            println!("outcome={} flips={} bits={}", t.outcome, t.flips, bits);
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_trials(a: TrialsArgs) -> Result<Outcome> {
    let d = input::dist(&a.dist)?;
    let runs = a.runs.or(d.runs).ok_or_else(|| anyhow!("inline weights need --runs"))?;
    let weights: Vec<String> = d.dist.weights().iter().map(u64::to_string).collect();
    let expected: Vec<f64> = (1..=d.dist.len()).map(|i| to_f64(&d.dist.probability(i))).collect();
    let (report, check) = if a.crosscheck {
        let c = crosscheck(&d.dist, runs, a.seed)?;
        (c.trials.clone(), Some(c))
    } else {
        (run_trials(&d.dist, runs, a.seed)?, None)
    };
    let chi = goodness_of_fit(&report.tallies, &expected);
    if a.common.json {
        let mut v = json!({ "weights": d.dist.weights(), "report": report, "chi_square": chi });
        if let Some(c) = &check {
            v["crosscheck"] = json!({
                "expected_flips": format_rational(&c.analysis.expected_flips),
                "flips_z": c.flips_z,
                "freq_z": c.freq_z,
            });
        }
        print_json(&v);
    } else {
        println!("{runs}");
        println!("{}", weights.join(" "));
        println!("Relative frequencies");
        println!("      {}", report.rel_freq.iter().map(|f| format!("{f:.6}")).collect::<Vec<_>>().join(" "));
        println!("realised, using {:.6} flips on average.", report.avg_flips);
        println!("chi-square {:.4} on {} dof, p = {:.4}", chi.statistic, chi.dof, chi.p_value);
        if let Some(c) = &check {
            println!(
                "exact expected flips {} (z = {:.3}); largest frequency |z| = {:.3}",
                format_rational(&c.analysis.expected_flips),
                c.flips_z,
                c.freq_z.iter().fold(0.0f64, |m, z| m.max(z.abs()))
            );
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_machine_build(a: MachineArgs) -> Result<Outcome> {
    let m = a.source.load()?;
    if a.common.json {
        print_json(&serde_json::to_value(&m)?);
    } else {
        print!("{}", to_text(&m));
    }
    Ok(Outcome::Ok)
}

fn cmd_machine_analyze(a: MachineArgs) -> Result<Outcome> {
    let m = a.source.load()?;
    let r = analyze(&m)?;
    if a.common.json {
        print_json(&serde_json::to_value(&r)?);
    } else {
        println!("nodes={} expected_flips={}", r.node_count, format_rational(&r.expected_flips));
        for (o, p) in &r.outcome_prob {
            println!("P({o})={}", format_rational(p));
        }
    }
    Ok(Outcome::Ok)
}

fn cmd_machine_dot(a: DotArgs) -> Result<Outcome> {
    let dot = to_dot(&a.source.load()?);
    match &a.out {
        Some(path) => fs::write(path, &dot).with_context(|| format!("writing {path}"))?,
        None if a.common.json => print_json(&json!({ "dot": dot })),
        None => print!("{dot}"),
    }
    Ok(Outcome::Ok)
}
