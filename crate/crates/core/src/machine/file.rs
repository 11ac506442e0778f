use std::collections::{HashMap, VecDeque};
use std::fmt::Write;

use super::{Machine, MachineError, MachineNode, NodeKind};

/// A validated machine plus any warnings raised while loading it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub machine: Machine,
    pub warnings: Vec<String>,
}

enum Raw {
    Interior(String, String),
    Leaf(usize),
}

/// Parses the line format:
///
/// ```text
/// outcomes <N>
/// root <id>
/// node <id> interior <heads-id> <tails-id> [label]
/// node <id> leaf <outcome>
/// ```
///
/// Blank lines and `#` comments are ignored. Nodes unreachable from the
/// root are dropped with a warning.
pub fn load_machine(text: &str) -> Result<Loaded, MachineError> {
    let mut raw: Vec<(String, Raw, Option<String>)> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut root = None;
    let mut outcomes = None;
    for (no, line) in text.lines().enumerate() {
        let line_no = no + 1;
        let err = |message: String| MachineError::Parse { line: line_no, message };
        let line = line.split('#').next().unwrap_or("").trim();
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["outcomes", n] => {
                outcomes = Some(n.parse::<usize>().ok().filter(|&n| n >= 1).ok_or_else(|| err(format!("bad outcome count `{n}`")))?)
            }
            ["root", id] => root = Some(id.to_string()),
            ["node", id, "leaf", o] => {
                let o = o.parse::<usize>().map_err(|_| err(format!("bad outcome `{o}`")))?;
                push(&mut raw, &mut index, id, Raw::Leaf(o), None)?;
            }
            ["node", _, "leaf", ..] => return Err(err("a leaf takes exactly one outcome".into())),
            ["node", id, "interior", h, t, label @ ..] => {
                let label = (!label.is_empty()).then(|| label.join(" "));
                push(&mut raw, &mut index, id, Raw::Interior(h.to_string(), t.to_string()), label)?;
            }
            ["node", _, "interior", ..] => return Err(err("an interior node needs exactly two successors".into())),
            _ => return Err(err(format!("unrecognised line `{line}`"))),
        }
    }
    let outcomes = outcomes.ok_or(MachineError::MissingOutcomes)?;
    let root_name = root.ok_or(MachineError::MissingRoot)?;
    let root = *index.get(&root_name).ok_or_else(|| MachineError::Dangling { node: "root".into(), target: root_name.clone() })?;

    let lookup = |node: &str, target: &str| {
        index.get(target).copied().ok_or_else(|| MachineError::Dangling { node: node.into(), target: target.into() })
    };
    let mut edges = vec![None; raw.len()];
    for (i, (name, kind, _)) in raw.iter().enumerate() {
        match kind {
            Raw::Interior(h, t) => edges[i] = Some((lookup(name, h)?, lookup(name, t)?)),
            Raw::Leaf(o) if !(1..=outcomes).contains(o) => {
                return Err(MachineError::LeafOutcome { node: name.clone(), outcome: *o, outcomes })
            }
            Raw::Leaf(_) => {}
        }
    }

    let mut order = vec![usize::MAX; raw.len()];
    let mut kept = Vec::new();
    let mut queue = VecDeque::from([root]);
    order[root] = 0;
    kept.push(root);
    while let Some(i) = queue.pop_front() {
        if let Some((h, t)) = edges[i] {
            for s in [h, t] {
                if order[s] == usize::MAX {
                    order[s] = kept.len();
                    kept.push(s);
                    queue.push_back(s);
                }
            }
        }
    }
    let warnings = raw
        .iter()
        .enumerate()
        .filter(|(i, _)| order[*i] == usize::MAX)
        .map(|(_, (name, _, _))| format!("node `{name}` is unreachable from the root and was dropped"))
        .collect();
    let nodes = kept
        .iter()
        .map(|&i| {
            let (name, kind, note) = &raw[i];
            let kind = match kind {
                Raw::Leaf(o) => NodeKind::Leaf { outcome: *o },
                Raw::Interior(..) => {
                    let (h, t) = edges[i].expect("resolved above");
                    NodeKind::Interior { heads: order[h], tails: order[t] }
                }
            };
            MachineNode { name: name.clone(), kind, config: None, note: note.clone() }
        })
        .collect();
    Ok(Loaded { machine: Machine { nodes, root: 0, outcomes }, warnings })
}

fn push(
    raw: &mut Vec<(String, Raw, Option<String>)>,
    index: &mut HashMap<String, usize>,
    id: &str,
    kind: Raw,
    label: Option<String>,
) -> Result<(), MachineError> {
    if index.insert(id.to_string(), raw.len()).is_some() {
        return Err(MachineError::DuplicateNode(id.to_string()));
    }
    raw.push((id.to_string(), kind, label));
    Ok(())
}

/// Writes a machine in the format read by [`load_machine`].
pub fn to_text(m: &Machine) -> String {
    let mut out = format!("outcomes {}\nroot {}\n", m.outcomes, m.nodes[m.root].name);
    for n in &m.nodes {
        match n.kind {
            NodeKind::Leaf { outcome } => writeln!(out, "node {} leaf {}", n.name, outcome),
            NodeKind::Interior { heads, tails } => {
                let label = match (&n.config, &n.note) {
                    (Some(c), _) => {
                        let w: Vec<String> = c.window.iter().map(u64::to_string).collect();
                        format!(" {}|{}|{}", c.low, w.join(","), c.high)
                    }
                    (None, Some(note)) => format!(" {note}"),
                    (None, None) => String::new(),
                };
                writeln!(out, "node {} interior {} {}{}", n.name, m.nodes[heads].name, m.nodes[tails].name, label)
            }
        }
        .expect("writing to a String");
    }
    out
}
