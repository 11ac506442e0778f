mod common;

use std::collections::{BTreeMap, BTreeSet};

use pgcl::machine::{crosscheck, to_text, NodeKind};
use pgcl::rational::{rat, Rational};
use pgcl::{analyze, build_machine, load_machine, to_dot, Machine, MachineError, WeightedDist};
use proptest::prelude::*;

fn machine(weights: &[u64]) -> Machine {
    build_machine(&WeightedDist::new(weights.to_vec()).unwrap(), 100_000).unwrap()
}

struct Dot {
    nodes: BTreeMap<String, String>,
    edges: Vec<(String, String, String)>,
}

/// Accepts the directed-graph subset emitted by `to_dot`: one statement per
/// line, attribute lists with quoted or bare values, and every edge endpoint
/// declared before the closing brace.
fn parse_dot(text: &str) -> Result<Dot, String> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let head = lines.next().ok_or("empty")?;
    let name = head.strip_prefix("digraph ").and_then(|r| r.strip_suffix(" {")).ok_or("bad header")?;
    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return Err(format!("bad graph id {name}"));
    }
    let mut dot = Dot { nodes: BTreeMap::new(), edges: Vec::new() };
    let mut closed = false;
    for line in lines {
        if closed {
            return Err("content after closing brace".into());
        }
        if line == "}" {
            closed = true;
            continue;
        }
        let stmt = line.strip_suffix(';').ok_or_else(|| format!("missing semicolon: {line}"))?;
        if !stmt.contains('[') && stmt.contains('=') {
            continue;
        }
        let (target, attrs) = match stmt.split_once(" [") {
            Some((t, a)) => (t, parse_attrs(a.strip_suffix(']').ok_or("unclosed attributes")?)?),
            None => (stmt, BTreeMap::new()),
        };
        if let Some((from, to)) = target.split_once(" -> ") {
            dot.edges.push((from.into(), to.into(), attrs.get("label").cloned().unwrap_or_default()));
        } else {
            let shape = attrs.get("shape").cloned().ok_or("node without shape")?;
            if dot.nodes.insert(target.into(), shape).is_some() {
                return Err(format!("node {target} declared twice"));
            }
        }
    }
    if !closed {
        return Err("missing closing brace".into());
    }
    for (a, b, _) in &dot.edges {
        if !dot.nodes.contains_key(a) || !dot.nodes.contains_key(b) {
            return Err(format!("edge {a} -> {b} names an undeclared node"));
        }
    }
    Ok(dot)
}

fn parse_attrs(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (key, after) = rest.split_once('=').ok_or_else(|| format!("attribute without value: {rest}"))?;
        let (value, tail) = if let Some(quoted) = after.strip_prefix('"') {
            let end = quoted.find('"').ok_or("unterminated string")?;
            (&quoted[..end], &quoted[end + 1..])
        } else {
            let end = after.find(',').unwrap_or(after.len());
            (&after[..end], &after[end..])
        };
        out.insert(key.trim().to_string(), value.to_string());
        rest = tail.trim_start_matches(',').trim();
    }
    Ok(out)
}

#[test]
fn small_machines_have_their_hand_solved_laws() {
    let cases: &[(&[u64], usize, Rational)] = &[
        (&[1], 1, rat(0, 1)),
        (&[1, 2], 4, rat(2, 1)),
        (&[1, 3], 4, rat(3, 2)),
        (&[1, 1], 3, rat(1, 1)),
        (&[1, 1, 1, 1, 1, 1], 17, rat(4, 1)),
    ];
    for (w, nodes, flips) in cases {
        let a = analyze(&machine(w)).unwrap();
        assert_eq!(a.node_count, *nodes, "{w:?}");
        assert_eq!(&a.expected_flips, flips, "{w:?}");
    }
}

#[test]
fn two_to_one_machine_loops_back_to_the_root() {
    let m = machine(&[1, 2]);
    assert_eq!(m.interior_count(), 2);
    let (h, t) = m.successors(m.root).unwrap();
    assert!(matches!(m.nodes[t].kind, NodeKind::Leaf { outcome: 2 }));
    let (hh, ht) = m.successors(h).unwrap();
    assert!(matches!(m.nodes[hh].kind, NodeKind::Leaf { outcome: 1 }));
    assert_eq!(ht, m.root);
}

#[test]
fn seven_sided_die_is_uniform() {
    let a = analyze(&machine(&[1; 7])).unwrap();
    assert!(a.outcome_prob.values().all(|p| *p == rat(1, 7)));
    assert!(a.expected_flips <= rat(12, 1));
}

#[test]
fn knuth_yao_file_analyses_to_the_optimal_die() {
    let text = std::fs::read_to_string(common::data_file("knuth-yao-die.machine")).unwrap();
    let loaded = load_machine(&text).unwrap();
    assert!(loaded.warnings.is_empty());
    let a = analyze(&loaded.machine).unwrap();
    assert_eq!(a.node_count, 13);
    assert_eq!(a.expected_flips, rat(11, 3));
    assert!(a.outcome_prob.values().all(|p| *p == rat(1, 6)));
    assert!(a.expected_flips < analyze(&machine(&[1; 6])).unwrap().expected_flips);
}

#[test]
fn machine_file_errors() {
    let err = |t: &str| load_machine(t).unwrap_err();
    assert!(matches!(err("outcomes 1\nroot a\nnode a interior b a"), MachineError::Dangling { .. }));
    assert!(matches!(err("outcomes 1\nroot a\nnode a leaf 1\nnode a leaf 1"), MachineError::DuplicateNode(_)));
    assert!(matches!(err("outcomes 1\nnode a leaf 1"), MachineError::MissingRoot));
    assert!(matches!(err("root a\nnode a leaf 1"), MachineError::MissingOutcomes));
    assert!(matches!(err("outcomes 1\nroot a\nnode a leaf 2"), MachineError::LeafOutcome { .. }));
    assert!(matches!(err("outcomes 1\nroot a\nnode a sideways"), MachineError::Parse { line: 3, .. }));
}

#[test]
fn unreachable_nodes_are_pruned_with_a_warning() {
    let loaded = load_machine("outcomes 2\nroot a\nnode a interior x y\nnode x leaf 1\nnode y leaf 2\nnode z leaf 1").unwrap();
    assert_eq!(loaded.machine.node_count(), 3);
    assert_eq!(loaded.warnings.len(), 1);
}

#[test]
fn trapped_cycle_is_singular() {
    let loaded = load_machine("outcomes 1\nroot a\nnode a interior b c\nnode b interior b b\nnode c leaf 1").unwrap();
    assert!(matches!(analyze(&loaded.machine), Err(MachineError::Singular)));
}

#[test]
fn die_dot_has_the_expected_shape() {
    let dot = parse_dot(&to_dot(&machine(&[1; 6]))).unwrap();
    assert_eq!(dot.nodes.len(), 17);
    assert_eq!(dot.edges.len(), 22);
    assert_eq!(dot.nodes.values().filter(|s| *s == "doublecircle").count(), 6);
    let labels: BTreeSet<&str> = dot.edges.iter().map(|(_, _, l)| l.as_str()).collect();
    assert_eq!(labels, BTreeSet::from(["H", "T"]));
}

#[test]
fn singleton_dot_has_no_edges() {
    let dot = parse_dot(&to_dot(&machine(&[4]))).unwrap();
    assert_eq!((dot.nodes.len(), dot.edges.len()), (1, 0));
}

#[test]
fn dot_checker_rejects_broken_graphs() {
    assert!(parse_dot("digraph m {\n  a [shape=box];\n  a -> b [label=\"H\"];\n}").is_err());
    assert!(parse_dot("digraph m {\n  a [shape=box];\n").is_err());
    assert!(parse_dot("digraph m {\n  a [shape=\"box];\n}").is_err());
}

#[test]
fn simulation_agrees_with_analysis() {
    for w in [vec![1, 1, 1, 1, 1, 1], vec![1, 2], vec![2, 1, 3, 4]] {
        let c = crosscheck(&WeightedDist::new(w.clone()).unwrap(), 200_000, 5).unwrap();
        assert!(c.max_abs_z() < 4.0, "{w:?}: z = {}", c.max_abs_z());
    }
    let c = crosscheck(&WeightedDist::new(vec![1]).unwrap(), 1_000, 5).unwrap();
    assert_eq!(c.trials.avg_flips, 0.0);
    assert_eq!(c.trials.tallies, vec![1_000]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn probabilities_are_conserved(w in prop::collection::vec(1u64..=12, 1..=6)) {
        let m = machine(&w);
        let a = analyze(&m).unwrap();
        let sum: Rational = a.outcome_prob.values().sum();
        prop_assert_eq!(sum, rat(1, 1));
        prop_assert_eq!(m.node_count(), m.interior_count() + w.len());
        prop_assert_eq!(m.edge_count(), 2 * m.interior_count());
    }

    #[test]
    fn text_form_round_trips(w in prop::collection::vec(1u64..=12, 1..=6)) {
        let m = machine(&w);
        let loaded = load_machine(&to_text(&m)).unwrap();
        prop_assert!(loaded.warnings.is_empty());
        prop_assert_eq!(to_text(&loaded.machine), to_text(&m));
        prop_assert_eq!(analyze(&loaded.machine).unwrap(), analyze(&m).unwrap());
    }

    #[test]
    fn every_dot_parses(w in prop::collection::vec(1u64..=12, 1..=6)) {
        let m = machine(&w);
        let dot = parse_dot(&to_dot(&m)).unwrap();
        prop_assert_eq!(dot.nodes.len(), m.node_count());
        prop_assert_eq!(dot.edges.len(), m.edge_count());
    }
}
