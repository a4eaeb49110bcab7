//! Mean local clustering coefficient of the clique expansion. Nodes with
//! fewer than two neighbours count as 0.

use std::collections::HashMap;

use rand::Rng as _;

use super::pairs::intersection_len;
use crate::hypergraph::{Hypergraph, NodeId};
use crate::seed;

/// Distinct clique-expansion neighbours of `v`, ascending.
pub(crate) fn neighbors(h: &Hypergraph, v: NodeId) -> Vec<NodeId> {
    let mut out: Vec<NodeId> = h
        .incident(v)
        .iter()
        .flat_map(|&e| h.edge(e).iter().copied())
        .filter(|&u| u != v)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Whether two nodes share a hyperedge.
fn adjacent(h: &Hypergraph, u: NodeId, v: NodeId) -> bool {
    intersection_len(h.incident(u), h.incident(v)) > 0
}

pub fn exact_clustering_coefficient(h: &Hypergraph) -> f64 {
    let n = h.num_nodes();
    if n == 0 {
        return 0.0;
    }
    let adjacency: Vec<Vec<NodeId>> = (0..n as NodeId).map(|v| neighbors(h, v)).collect();
    let mut total = 0.0;
    for nbrs in &adjacency {
        let d = nbrs.len();
        if d < 2 {
            continue;
        }
        let mut closed = 0usize;
        for (i, &a) in nbrs.iter().enumerate() {
            let na = &adjacency[a as usize];
            closed += intersection_len(&nbrs[i + 1..], na);
        }
        total += closed as f64 / (d * (d - 1) / 2) as f64;
    }
    total / n as f64
}

/// Wedge-sampling estimate: each sample draws a uniform node and, if it has
/// two or more neighbours, a uniform pair of them; the fraction of closed
/// wedges is unbiased for the mean local coefficient.
pub fn estimate_clustering_coefficient(h: &Hypergraph, samples: usize, seed: u64) -> f64 {
    let n = h.num_nodes();
    if n == 0 || samples == 0 {
        return 0.0;
    }
    let mut rng = seed::rng(seed);
    let mut cache: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
    let mut closed = 0usize;
    for _ in 0..samples {
        let v = rng.random_range(0..n) as NodeId;
        let nbrs = cache.entry(v).or_insert_with(|| neighbors(h, v));
        let d = nbrs.len();
        if d < 2 {
            continue;
        }
        let a = rng.random_range(0..d);
        let mut b = rng.random_range(0..d - 1);
        if b >= a {
            b += 1;
        }
        if adjacent(h, nbrs[a], nbrs[b]) {
            closed += 1;
        }
    }
    closed as f64 / samples as f64
}

/// Exact when `|V| ≤ exact_threshold`, sampled otherwise.
pub fn global_clustering_coefficient(h: &Hypergraph, exact_threshold: usize, samples: usize, seed: u64) -> f64 {
    if h.num_nodes() <= exact_threshold {
        exact_clustering_coefficient(h)
    } else {
        estimate_clustering_coefficient(h, samples, seed)
    }
}
