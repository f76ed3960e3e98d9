//! Domain types shared by every module.

mod cnf;
mod graph;
mod ops;
mod parse;
mod sets;

pub use cnf::{BlockAssignment, CnfFormula, Literal, CLAUSE_CAP_FACTOR};
pub use graph::{Graph, NodeId};
pub use ops::{Answer, CostCounters, Mode, ProblemKind, QueryOp, UpdateOp};
pub use parse::{graph_to_text, parse_cnf, parse_graph};
pub use sets::{SetId, SetSystem};

use sha2::{Digest, Sha256};

/// What an engine maintains: a graph or a set family.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Instance {
    Graph(Graph),
    Sets(SetSystem),
}

impl Instance {
    pub fn as_graph(&self) -> Option<&Graph> {
        match self {
            Instance::Graph(g) => Some(g),
            Instance::Sets(_) => None,
        }
    }

    pub fn as_sets(&self) -> Option<&SetSystem> {
        match self {
            Instance::Sets(s) => Some(s),
            Instance::Graph(_) => None,
        }
    }

    /// Canonical text form; equal instances have equal text.
    pub fn to_text(&self) -> String {
        match self {
            Instance::Graph(g) => graph_to_text(g),
            Instance::Sets(s) => s.to_text(),
        }
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.to_text().as_bytes())
    }
}

impl From<Graph> for Instance {
    fn from(g: Graph) -> Self {
        Instance::Graph(g)
    }
}

impl From<SetSystem> for Instance {
    fn from(s: SetSystem) -> Self {
        Instance::Sets(s)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
