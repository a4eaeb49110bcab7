use rand::seq::index;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NodeId};
use crate::seed;

/// Ordered-pair counts of clique-expansion distances from the given sources;
/// index d holds the number of (source, target) pairs at distance d ≥ 1.
pub fn distance_histogram(h: &Hypergraph, sources: impl IntoIterator<Item = NodeId>) -> Vec<u64> {
    let n = h.num_nodes();
    let mut node_stamp = vec![u32::MAX; n];
    let mut edge_stamp = vec![u32::MAX; h.num_edges()];
    let mut hist: Vec<u64> = vec![0];
    let mut frontier: Vec<NodeId> = Vec::new();
    let mut next: Vec<NodeId> = Vec::new();
    for (run, s) in sources.into_iter().enumerate() {
        let run = run as u32;
        node_stamp[s as usize] = run;
        frontier.clear();
        frontier.push(s);
        let mut depth = 0usize;
        while !frontier.is_empty() {
            depth += 1;
            next.clear();
            for &u in &frontier {
                for &e in h.incident(u) {
                    if edge_stamp[e as usize] == run {
                        continue;
                    }
                    edge_stamp[e as usize] = run;
                    for &w in h.edge(e) {
                        if node_stamp[w as usize] != run {
                            node_stamp[w as usize] = run;
                            next.push(w);
                        }
                    }
                }
            }
            if !next.is_empty() {
                if hist.len() <= depth {
                    hist.resize(depth + 1, 0);
                }
                hist[depth] += next.len() as u64;
            }
            std::mem::swap(&mut frontier, &mut next);
        }
    }
    hist
}

/// Linearly interpolated 90th percentile of a distance histogram.
pub fn interpolated_percentile(hist: &[u64], quantile: f64) -> Result<f64> {
    let total: u64 = hist.iter().skip(1).sum();
    if total == 0 {
        return Err(Error::NoReachablePairs);
    }
    let total = total as f64;
    let mut prev = 0.0;
    let mut running = 0u64;
    for (d, &c) in hist.iter().enumerate().skip(1) {
        running += c;
        let f = running as f64 / total;
        if f >= quantile && c > 0 {
            return Ok((d - 1) as f64 + (quantile - prev) / (f - prev));
        }
        prev = f;
    }
    Ok((hist.len() - 1) as f64)
}

/// Effective diameter: BFS from every node when `|V| ≤ exact_threshold`,
/// otherwise from `source_sample` seeded uniform sources.
pub fn effective_diameter(h: &Hypergraph, exact_threshold: usize, source_sample: usize, seed: u64) -> Result<f64> {
    let n = h.num_nodes();
    let hist = if n <= exact_threshold || source_sample >= n {
        distance_histogram(h, 0..n as NodeId)
    } else {
        let mut rng = seed::rng(seed);
        let mut sources: Vec<NodeId> = index::sample(&mut rng, n, source_sample.max(1))
            .into_iter()
            .map(|i| i as NodeId)
            .collect();
        sources.sort_unstable();
        distance_histogram(h, sources)
    };
    interpolated_percentile(&hist, 0.9)
}
