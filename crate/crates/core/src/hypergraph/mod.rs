//! Immutable hypergraph store with a node-to-hyperedge incidence index, plus
//! sub-hypergraph construction by node or hyperedge selection.
//!
//! Node IDs are dense (`0..num_nodes`). The label each node carried in its
//! source file is kept in a side table so samples can be written back out in
//! the original ID space.

mod induced;
pub mod io;

use std::collections::HashSet;

pub use induced::InducedTracker;

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type EdgeId = u32;

/// Counts of what construction discarded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildReport {
    pub duplicates_removed: usize,
    pub isolated_dropped: usize,
}

/// Hyperedges are stored CSR-style, as is the inverted incidence index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    edge_offsets: Vec<usize>,
    edge_members: Vec<NodeId>,
    node_offsets: Vec<usize>,
    node_edges: Vec<EdgeId>,
    labels: Vec<u64>,
}

impl Hypergraph {
    /// Builds a hypergraph from hyperedges given as label lists.
    ///
    /// Members are sorted and deduplicated, repeated hyperedges are dropped
    /// (first occurrence wins) and labels are densified in ascending order.
    /// Empty hyperedges are rejected.
    pub fn from_labeled_edges<I>(edges: I) -> Result<(Hypergraph, BuildReport)>
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        let mut seen: HashSet<Vec<u64>> = HashSet::new();
        let mut unique: Vec<Vec<u64>> = Vec::new();
        let mut report = BuildReport::default();
        for (i, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(Error::InvalidArgument(format!("hyperedge {i} is empty")));
            }
            e.sort_unstable();
            e.dedup();
            if seen.contains(&e) {
                report.duplicates_removed += 1;
            } else {
                seen.insert(e.clone());
                unique.push(e);
            }
        }
        let mut labels: Vec<u64> = unique.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let dense: Vec<Vec<NodeId>> = unique
            .iter()
            .map(|e| {
                e.iter()
                    .map(|l| labels.binary_search(l).expect("label present") as NodeId)
                    .collect()
            })
            .collect();
        Ok((Hypergraph::from_clean(dense, labels), report))
    }

    /// Builds from hyperedges over node IDs `0..num_nodes`. Nodes that end up
    /// with degree zero are dropped (with a warning) and the rest renumbered;
    /// the original ID becomes the node's label.
    pub fn from_edges(num_nodes: usize, edges: Vec<Vec<NodeId>>) -> Result<(Hypergraph, BuildReport)> {
        if let Some(bad) = edges.iter().flatten().find(|&&v| v as usize >= num_nodes) {
            return Err(Error::UnknownNode(*bad));
        }
        let (g, mut report) =
            Hypergraph::from_labeled_edges(edges.into_iter().map(|e| e.into_iter().map(u64::from).collect()))?;
        report.isolated_dropped = num_nodes - g.num_nodes();
        if report.isolated_dropped > 0 {
            log::warn!("dropped {} isolated nodes", report.isolated_dropped);
        }
        Ok((g, report))
    }

    /// Caller guarantees members are sorted, unique, in range, hyperedges are
    /// pairwise distinct and every node is covered.
    pub(crate) fn from_clean(edges: Vec<Vec<NodeId>>, labels: Vec<u64>) -> Hypergraph {
        let n = labels.len();
        let mut edge_offsets = Vec::with_capacity(edges.len() + 1);
        edge_offsets.push(0);
        let mut edge_members = Vec::with_capacity(edges.iter().map(Vec::len).sum());
        let mut degree = vec![0usize; n];
        for e in &edges {
            for &v in e {
                degree[v as usize] += 1;
            }
            edge_members.extend_from_slice(e);
            edge_offsets.push(edge_members.len());
        }
        let mut node_offsets = Vec::with_capacity(n + 1);
        node_offsets.push(0);
        for d in &degree {
            node_offsets.push(node_offsets.last().unwrap() + d);
        }
        let mut cursor = node_offsets[..n].to_vec();
        let mut node_edges = vec![0 as EdgeId; edge_members.len()];
        for (id, e) in edges.iter().enumerate() {
            for &v in e {
                node_edges[cursor[v as usize]] = id as EdgeId;
                cursor[v as usize] += 1;
            }
        }
        debug_assert!(degree.iter().all(|&d| d > 0));
        Hypergraph {
            edge_offsets,
            edge_members,
            node_offsets,
            node_edges,
            labels,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_offsets.len() - 1
    }

    #[inline]
    pub fn edge(&self, e: EdgeId) -> &[NodeId] {
        let e = e as usize;
        &self.edge_members[self.edge_offsets[e]..self.edge_offsets[e + 1]]
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[NodeId]> + '_ {
        self.edge_offsets
            .windows(2)
            .map(move |w| &self.edge_members[w[0]..w[1]])
    }

    /// Hyperedges containing `v`, in ascending ID order.
    #[inline]
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        let v = v as usize;
        &self.node_edges[self.node_offsets[v]..self.node_offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: NodeId) -> usize {
        let v = v as usize;
        self.node_offsets[v + 1] - self.node_offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.node_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.node_offsets.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0)
    }

    /// Σ_e |e|, which equals Σ_v d_v and the number of incidence-matrix ones.
    pub fn total_size(&self) -> usize {
        self.edge_members.len()
    }

    pub fn label(&self, v: NodeId) -> u64 {
        self.labels[v as usize]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Hyperedge `e` in label space.
    pub fn labeled_edge(&self, e: EdgeId) -> Vec<u64> {
        self.edge(e).iter().map(|&v| self.label(v)).collect()
    }

    /// Looks up a hyperedge given by sorted node IDs.
    pub fn find_edge(&self, members: &[NodeId]) -> Option<EdgeId> {
        let first = *members.first()?;
        if first as usize >= self.num_nodes() {
            return None;
        }
        // Scan the incidence list of the member with the fewest hyperedges.
        let pivot = members
            .iter()
            .copied()
            .filter(|&v| (v as usize) < self.num_nodes())
            .min_by_key(|&v| self.degree(v))?;
        self.incident(pivot)
            .iter()
            .copied()
            .find(|&e| self.edge(e) == members)
    }
}

/// How a sub-hypergraph's node set relates to its hyperedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selection {
    /// Nodes were drawn; hyperedges are those induced by them.
    Nodes,
    /// Hyperedges were drawn; nodes are their union.
    Hyperedges,
}

#[derive(Clone, Debug)]
pub struct SubHypergraph<'g> {
    parent: &'g Hypergraph,
    edges: Vec<EdgeId>,
    nodes: Vec<NodeId>,
    selection: Selection,
    trimmed: Vec<EdgeId>,
}

impl<'g> SubHypergraph<'g> {
    /// Induced sub-hypergraph: every hyperedge whose members all lie in `nodes`.
    pub fn induced_by_nodes(parent: &'g Hypergraph, nodes: &[NodeId]) -> Result<Self> {
        let mut tracker = InducedTracker::new(parent);
        let mut edges = Vec::new();
        for &v in nodes {
            tracker.add_node_into(v, &mut edges)?;
        }
        Ok(Self::from_node_selection(parent, tracker.into_nodes(), edges, Vec::new()))
    }

    /// Sub-hypergraph made of the given hyperedges and the union of their members.
    pub fn from_hyperedges(parent: &'g Hypergraph, ids: &[EdgeId]) -> Result<Self> {
        let mut in_nodes = vec![false; parent.num_nodes()];
        let mut edges = Vec::with_capacity(ids.len());
        for &e in ids {
            if e as usize >= parent.num_edges() {
                return Err(Error::HyperedgeOutOfRange {
                    id: e as usize,
                    len: parent.num_edges(),
                });
            }
            edges.push(e);
            for &v in parent.edge(e) {
                in_nodes[v as usize] = true;
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let nodes = (0..parent.num_nodes() as NodeId)
            .filter(|&v| in_nodes[v as usize])
            .collect();
        Ok(SubHypergraph {
            parent,
            edges,
            nodes,
            selection: Selection::Hyperedges,
            trimmed: Vec::new(),
        })
    }

    /// Node-selection output. `trimmed` holds induced hyperedges that were
    /// removed afterwards to hit an exact size.
    pub(crate) fn from_node_selection(
        parent: &'g Hypergraph,
        mut nodes: Vec<NodeId>,
        mut edges: Vec<EdgeId>,
        mut trimmed: Vec<EdgeId>,
    ) -> Self {
        nodes.sort_unstable();
        edges.sort_unstable();
        trimmed.sort_unstable();
        SubHypergraph {
            parent,
            edges,
            nodes,
            selection: Selection::Nodes,
            trimmed,
        }
    }

    pub(crate) fn with_trimmed(mut self, mut trimmed: Vec<EdgeId>) -> Self {
        trimmed.sort_unstable();
        self.trimmed = trimmed;
        self
    }

    pub fn parent(&self) -> &'g Hypergraph {
        self.parent
    }

    /// Selected hyperedge IDs, ascending.
    pub fn edge_ids(&self) -> &[EdgeId] {
        &self.edges
    }

    /// Selected node IDs, ascending. For node selection this is the drawn set,
    /// which may include nodes not covered by any selected hyperedge.
    pub fn node_ids(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn selection(&self) -> Selection {
        self.selection
    }

    /// Hyperedges removed by exact-size trimming.
    pub fn trimmed(&self) -> &[EdgeId] {
        &self.trimmed
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Materializes the selected hyperedges as a standalone hypergraph whose
    /// node set is the union of their members. Labels are inherited.
    pub fn to_hypergraph(&self) -> Hypergraph {
        let parent = self.parent;
        let mut map = vec![NodeId::MAX; parent.num_nodes()];
        let mut used: Vec<NodeId> = self
            .edges
            .iter()
            .flat_map(|&e| parent.edge(e).iter().copied())
            .collect();
        used.sort_unstable();
        used.dedup();
        for (i, &v) in used.iter().enumerate() {
            map[v as usize] = i as NodeId;
        }
        let edges = self
            .edges
            .iter()
            .map(|&e| parent.edge(e).iter().map(|&v| map[v as usize]).collect())
            .collect();
        let labels = used.iter().map(|&v| parent.label(v)).collect();
        Hypergraph::from_clean(edges, labels)
    }
}
