//! Finite fair-coin state machines: extraction from the discrete sampler,
//! exact analysis, a line-oriented file format and DOT rendering.

mod analyze;
mod build;
mod crosscheck;
mod dot;
mod file;

use serde::Serialize;
use thiserror::Error;

use crate::sampler::SamplerError;

pub use analyze::{analyze, MachineAnalysis};
pub use build::{build_machine, DEFAULT_MAX_NODES};
pub use crosscheck::{crosscheck, Crosscheck};
pub use dot::to_dot;
pub use file::{load_machine, to_text, Loaded};

/// Sampler configuration a built node stands for; `window` holds
/// `total × d` over the active range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NodeLabel {
    pub low: usize,
    pub window: Vec<u64>,
    pub high: usize,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    /// Successor indices for bit 0 and bit 1.
    Interior { heads: usize, tails: usize },
    /// 1-based outcome.
    Leaf { outcome: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MachineNode {
    pub name: String,
    pub kind: NodeKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<NodeLabel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl MachineNode {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf { .. })
    }
}

/// Nodes are addressed by position; every node is reachable from `root`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Machine {
    pub nodes: Vec<MachineNode>,
    pub root: usize,
    pub outcomes: usize,
}

impl Machine {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn interior_count(&self) -> usize {
        self.nodes.iter().filter(|n| !n.is_leaf()).count()
    }

    pub fn edge_count(&self) -> usize {
        2 * self.interior_count()
    }

    pub fn successors(&self, i: usize) -> Option<(usize, usize)> {
        match self.nodes[i].kind {
            NodeKind::Interior { heads, tails } => Some((heads, tails)),
            NodeKind::Leaf { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("node budget of {0} exceeded")]
    Budget(usize),
    #[error("linear system is singular: some node cannot reach a leaf")]
    Singular,
    #[error("outcome probabilities sum to {0}, not 1")]
    NotConserved(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("node `{node}` points to missing node `{target}`")]
    Dangling { node: String, target: String },
    #[error("node `{0}` is defined twice")]
    DuplicateNode(String),
    #[error("no root declared")]
    MissingRoot,
    #[error("no outcome count declared")]
    MissingOutcomes,
    #[error("leaf `{node}` has outcome {outcome} outside 1..={outcomes}")]
    LeafOutcome { node: String, outcome: usize, outcomes: usize },
}
