use super::{EdgeId, Hypergraph, NodeId};
use crate::error::{Error, Result};

/// Maintains the induced hyperedge set while nodes are added one at a time.
///
/// Each hyperedge keeps a count of members not yet added and is emitted when
/// that count reaches zero, so a full run costs O(Σ|e|).
#[derive(Clone, Debug)]
pub struct InducedTracker<'g> {
    graph: &'g Hypergraph,
    missing: Vec<u32>,
    added: Vec<bool>,
    nodes: Vec<NodeId>,
    induced: usize,
}

impl<'g> InducedTracker<'g> {
    pub fn new(graph: &'g Hypergraph) -> Self {
        InducedTracker {
            graph,
            missing: graph.edges().map(|e| e.len() as u32).collect(),
            added: vec![false; graph.num_nodes()],
            nodes: Vec::new(),
            induced: 0,
        }
    }

    /// Adds `v` and returns the hyperedges it completes.
    pub fn add_node(&mut self, v: NodeId) -> Result<Vec<EdgeId>> {
        let mut out = Vec::new();
        self.add_node_into(v, &mut out)?;
        Ok(out)
    }

    /// Like [`add_node`](Self::add_node) but appends into `out`. Re-adding a
    /// node is a no-op.
    pub fn add_node_into(&mut self, v: NodeId, out: &mut Vec<EdgeId>) -> Result<()> {
        let Some(flag) = self.added.get_mut(v as usize) else {
            return Err(Error::UnknownNode(v));
        };
        if *flag {
            return Ok(());
        }
        *flag = true;
        self.nodes.push(v);
        for &e in self.graph.incident(v) {
            let m = &mut self.missing[e as usize];
            *m -= 1;
            if *m == 0 {
                out.push(e);
                self.induced += 1;
            }
        }
        Ok(())
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.added[v as usize]
    }

    pub fn is_induced(&self, e: EdgeId) -> bool {
        self.missing[e as usize] == 0
    }

    /// Number of hyperedges induced so far.
    pub fn induced_count(&self) -> usize {
        self.induced
    }

    /// Nodes in insertion order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.nodes
    }
}
