use std::collections::{HashMap, VecDeque};

use super::{Machine, MachineError, MachineNode, NodeKind, NodeLabel};
use crate::sampler::{CumulativeDist, WeightedDist};

pub const DEFAULT_MAX_NODES: usize = 100_000;

/// Breadth-first closure of the sampler's configurations, heads before
/// tails. Each outcome gets a single shared leaf.
pub fn build_machine(d: &WeightedDist, max_nodes: usize) -> Result<Machine, MachineError> {
    let start = CumulativeDist::from(d);
    let mut nodes: Vec<MachineNode> = Vec::new();
    let mut configs: Vec<Option<CumulativeDist>> = Vec::new();
    let mut seen: HashMap<(usize, Vec<u64>, usize), usize> = HashMap::new();
    let mut leaves: HashMap<usize, usize> = HashMap::new();
    let mut queue = VecDeque::new();

    let mut intern = |c: CumulativeDist,
                      nodes: &mut Vec<MachineNode>,
                      configs: &mut Vec<Option<CumulativeDist>>,
                      queue: &mut VecDeque<usize>|
     -> Result<usize, MachineError> {
        let existing = if c.is_terminal() { leaves.get(&c.low()) } else { seen.get(&c.key()) };
        if let Some(&i) = existing {
            return Ok(i);
        }
        if nodes.len() >= max_nodes {
            return Err(MachineError::Budget(max_nodes));
        }
        let i = nodes.len();
        let config = NodeLabel { low: c.low(), window: c.window().to_vec(), high: c.high(), total: c.total() };
        if c.is_terminal() {
            leaves.insert(c.low(), i);
            nodes.push(MachineNode {
                name: format!("n{i}"),
                kind: NodeKind::Leaf { outcome: c.low() + 1 },
                config: Some(config),
                note: None,
            });
            configs.push(None);
        } else {
            seen.insert(c.key(), i);
            nodes.push(MachineNode {
                name: format!("n{i}"),
                kind: NodeKind::Interior { heads: usize::MAX, tails: usize::MAX },
                config: Some(config),
                note: None,
            });
            configs.push(Some(c));
            queue.push_back(i);
        }
        Ok(i)
    };

    let root = intern(start, &mut nodes, &mut configs, &mut queue)?;
    while let Some(i) = queue.pop_front() {
        let c = configs[i].take().expect("interior nodes are queued once");
        let heads = intern(c.split_left()?, &mut nodes, &mut configs, &mut queue)?;
        let tails = intern(c.split_right()?, &mut nodes, &mut configs, &mut queue)?;
        nodes[i].kind = NodeKind::Interior { heads, tails };
    }
    Ok(Machine { nodes, root, outcomes: d.len() })
}
