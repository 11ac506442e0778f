use std::fmt::Write;

use super::{Machine, NodeKind};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Renders a machine as a Graphviz digraph. Interior nodes show
/// `low | window | high`, leaves show their outcome, edges are `H`/`T`.
pub fn to_dot(m: &Machine) -> String {
    let mut out = String::from("digraph machine {\n  rankdir=TB;\n");
    for (i, n) in m.nodes.iter().enumerate() {
        let (shape, label) = match (&n.kind, &n.config) {
            (NodeKind::Leaf { outcome }, _) => ("doublecircle", outcome.to_string()),
            (NodeKind::Interior { .. }, Some(c)) => {
                let w: Vec<String> = c.window.iter().map(u64::to_string).collect();
                ("box", format!("{} | {} | {}", c.low, w.join(" "), c.high))
            }
            (NodeKind::Interior { .. }, None) => ("box", n.note.clone().unwrap_or_else(|| n.name.clone())),
        };
        let root = if i == m.root { ", penwidth=2" } else { "" };
        writeln!(out, "  n{i} [shape={shape}, label=\"{}\"{root}];", escape(&label)).expect("writing to a String");
    }
    for (i, n) in m.nodes.iter().enumerate() {
        if let NodeKind::Interior { heads, tails } = n.kind {
            writeln!(out, "  n{i} -> n{heads} [label=\"H\"];\n  n{i} -> n{tails} [label=\"T\"];").expect("writing to a String");
        }
    }
    out.push_str("}\n");
    out
}
