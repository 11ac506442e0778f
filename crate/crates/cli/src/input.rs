use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use pgcl::lang::{parse_expr, parse_source, Params, Source};
use pgcl::rational::{dyadic_grid, parse_rational, uniform_grid, Rational};
use pgcl::{Expr, StateSpace, WeightedDist};

/// Reads a file path, or standard input for `-`.
pub fn read_text(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

pub fn rational(text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|_| anyhow!("`{text}` is not a number"))
}

/// Parses repeated `name=value` parameter overrides.
pub fn params(pairs: &[String]) -> Result<Params> {
    let mut out = Params::new();
    for pair in pairs {
        let (k, v) = pair.split_once('=').ok_or_else(|| anyhow!("parameter `{pair}` is not of the form name=value"))?;
        out.insert(k.trim().to_string(), rational(v)?);
    }
    Ok(out)
}

/// `name=dyadic`, `name=uniform:N` or `name=v1,v2,...`.
pub fn grid(spec: &str) -> Result<(String, Vec<Rational>)> {
    let (name, values) = spec.split_once('=').ok_or_else(|| anyhow!("grid `{spec}` is not of the form name=values"))?;
    let values = match values.trim() {
        "dyadic" => dyadic_grid(),
        v if v.starts_with("uniform:") => {
            let n: u32 = v["uniform:".len()..].parse().map_err(|_| anyhow!("bad grid size in `{v}`"))?;
            if n == 0 {
                bail!("grid size must be positive");
            }
            uniform_grid(n)
        }
        v => v.split(',').map(rational).collect::<Result<_>>()?,
    };
    Ok((name.trim().to_string(), values))
}

pub fn load_source(path: &str, overrides: &Params) -> Result<Source> {
    let text = read_text(path)?;
    parse_source(&text, overrides).with_context(|| format!("parsing {path}"))
}

pub fn expr(text: &str, space: &StateSpace, params: &Params) -> Result<Expr> {
    parse_expr(text, space, params).with_context(|| format!("parsing `{text}`"))
}

/// Variable indices for a comma-separated list of names.
pub fn observables(list: &str, space: &StateSpace) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| space.var_index(name).ok_or_else(|| anyhow!("`{name}` is not a declared variable")))
        .collect()
}

/// A distribution given inline (`"1 1 1"`, `"0.2,0.1,0.3,0.4"`) or as a
/// trial file whose first line is the run count.
pub struct DistInput {
    pub dist: WeightedDist,
    pub runs: Option<u64>,
}

pub fn dist(spec: &str) -> Result<DistInput> {
    if spec == "-" || Path::new(spec).is_file() {
        let text = read_text(spec)?;
        let (runs, dist) = WeightedDist::parse_trials_file(&text).with_context(|| format!("reading {spec}"))?;
        return Ok(DistInput { dist, runs: Some(runs) });
    }
    let values = spec
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(rational)
        .collect::<Result<Vec<_>>>()?;
    Ok(DistInput { dist: WeightedDist::from_rationals(&values)?, runs: None })
}
