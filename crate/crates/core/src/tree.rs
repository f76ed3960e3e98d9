//! Heap-indexed binary trees used by the decremental gadgets.

use crate::error::Result;
use crate::model::{Graph, NodeId};

/// A complete binary tree with `slots` leaf slots (a power of two, at
/// least 2) of which the first `real` carry leaves. Heap index 1 is the
/// root, leaves are `slots..2·slots`. Subtrees without a real leaf get no
/// nodes and no arcs.
#[derive(Debug, Clone)]
pub(crate) struct HeapTree {
    slots: usize,
    real: usize,
    ids: Vec<NodeId>,
    towards_root: bool,
}

impl HeapTree {
    /// Adds the tree to `g`, allocating its internal nodes. Arcs point away
    /// from the root, or towards it when `towards_root`.
    pub fn build(
        g: &mut Graph,
        root: NodeId,
        leaves: &[NodeId],
        towards_root: bool,
    ) -> Result<Self> {
        let slots = leaves.len().next_power_of_two().max(2);
        let mut tree = HeapTree {
            slots,
            real: leaves.len(),
            ids: vec![usize::MAX; 2 * slots],
            towards_root,
        };
        tree.ids[1] = root;
        for h in 2..slots {
            if tree.is_real(h) {
                tree.ids[h] = g.add_nodes(1);
            }
        }
        for (i, &leaf) in leaves.iter().enumerate() {
            tree.ids[slots + i] = leaf;
        }
        for h in 2..2 * slots {
            if tree.is_real(h) {
                let (u, v) = tree.arc(h);
                g.add_edge(u, v)?;
            }
        }
        Ok(tree)
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn leaf(&self, i: usize) -> usize {
        self.slots + i
    }

    pub fn is_leaf(&self, h: usize) -> bool {
        h >= self.slots
    }

    /// Whether the subtree at `h` holds a real leaf.
    pub fn is_real(&self, mut h: usize) -> bool {
        while h < self.slots {
            h *= 2;
        }
        h - self.slots < self.real
    }

    /// The arc joining `h` (not the root) to its parent.
    pub fn arc(&self, h: usize) -> (NodeId, NodeId) {
        let (parent, child) = (self.ids[h / 2], self.ids[h]);
        if self.towards_root {
            (child, parent)
        } else {
            (parent, child)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prunes_dummy_subtrees() {
        let mut g = Graph::directed(4);
        let t = HeapTree::build(&mut g, 3, &[0, 1, 2], false).unwrap();
        assert_eq!(t.slots(), 4);
        // root, two internal nodes, three leaves
        assert_eq!(g.node_count(), 6);
        assert_eq!(g.edge_count(), 5);
        assert!(!t.is_real(t.leaf(3)));
        assert_eq!(t.arc(t.leaf(0)), (4, 0));
    }

    #[test]
    fn single_leaf_hangs_off_the_root() {
        let mut g = Graph::directed(2);
        let t = HeapTree::build(&mut g, 1, &[0], true).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(t.arc(t.leaf(0)), (0, 1));
    }
}
