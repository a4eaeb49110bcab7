use std::collections::HashMap;

use rand::Rng as _;

use super::Distribution;
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::seed;

#[inline]
pub(crate) fn pair_key(u: NodeId, v: NodeId) -> u64 {
    let (a, b) = if u < v { (u, v) } else { (v, u) };
    (u64::from(a) << 32) | u64::from(b)
}

/// Size of the sorted intersection of two ascending slices.
pub(crate) fn intersection_len(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Pair degrees of every node pair that co-occurs in at least one hyperedge.
///
/// Hyperedges with more than `size_cap` members are not pair-expanded.
/// Pairs covered only by such hyperedges are estimated instead: each oversize
/// hyperedge contributes `C(cap, 2)` uniformly sampled member pairs, each
/// weighted by `C(|e|, 2) / C(cap, 2)` and counted only when `e` is the
/// lowest-ID oversize hyperedge containing the pair and no small hyperedge
/// does. That Horvitz–Thompson weighting keeps the estimated pair counts
/// unbiased.
pub fn pair_degree_distribution(h: &Hypergraph, size_cap: usize, seed: u64) -> Distribution {
    let mut counts: HashMap<u64, u32> = HashMap::new();
    let mut oversize = Vec::new();
    for (id, e) in h.edges().enumerate() {
        if e.len() > size_cap {
            oversize.push(id as EdgeId);
            continue;
        }
        for (i, &u) in e.iter().enumerate() {
            for &v in &e[i + 1..] {
                *counts.entry(pair_key(u, v)).or_insert(0) += 1;
            }
        }
    }
    let mut hist: Vec<f64> = Vec::new();
    let mut bump = |k: usize, w: f64| {
        if hist.len() <= k {
            hist.resize(k + 1, 0.0);
        }
        hist[k] += w;
    };
    for &c in counts.values() {
        bump(c as usize, 1.0);
    }
    if !oversize.is_empty() {
        let mut rng = seed::rng(seed::derive(seed, 0x7061_6972));
        let cap = size_cap.max(2);
        let per_edge = cap * (cap - 1) / 2;
        for &e in &oversize {
            let members = h.edge(e);
            let s = members.len();
            let weight = (s * (s - 1) / 2) as f64 / per_edge as f64;
            for _ in 0..per_edge {
                let a = rng.random_range(0..s);
                let mut b = rng.random_range(0..s - 1);
                if b >= a {
                    b += 1;
                }
                let (u, v) = (members[a], members[b]);
                let mut degree = 0usize;
                let mut owned = true;
                let (iu, iv) = (h.incident(u), h.incident(v));
                let (mut i, mut j) = (0, 0);
                while i < iu.len() && j < iv.len() {
                    match iu[i].cmp(&iv[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            let f = iu[i];
                            degree += 1;
                            let large = h.edge(f).len() > size_cap;
                            if !large || f < e {
                                owned = false;
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
                if owned {
                    bump(degree, weight);
                }
            }
        }
    }
    Distribution::from_weights(hist.into_iter().enumerate().map(|(k, w)| (k as u64, w)))
}

/// |e ∩ e′| over unordered hyperedge pairs that share at least one node.
pub fn intersection_size_distribution(h: &Hypergraph) -> Distribution {
    let m = h.num_edges();
    let mut overlap = vec![0u32; m];
    let mut touched: Vec<EdgeId> = Vec::new();
    let mut hist: Vec<u64> = Vec::new();
    for e in 0..m as EdgeId {
        for &v in h.edge(e) {
            for &f in h.incident(v) {
                if f > e {
                    if overlap[f as usize] == 0 {
                        touched.push(f);
                    }
                    overlap[f as usize] += 1;
                }
            }
        }
        for f in touched.drain(..) {
            let k = overlap[f as usize] as usize;
            overlap[f as usize] = 0;
            if hist.len() <= k {
                hist.resize(k + 1, 0);
            }
            hist[k] += 1;
        }
    }
    Distribution::from_histogram(&hist)
}
