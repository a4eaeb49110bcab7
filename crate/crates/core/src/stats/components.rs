use super::Distribution;
use crate::hypergraph::Hypergraph;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    /// Returns false if already joined.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
        true
    }

    pub fn component_size(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }
}

/// Component sizes of the clique expansion, largest first. Members of one
/// hyperedge are merged directly so the cliques are never built.
pub fn component_sizes(h: &Hypergraph) -> Vec<usize> {
    let mut uf = UnionFind::new(h.num_nodes());
    for e in h.edges() {
        for &v in &e[1..] {
            uf.union(e[0], v);
        }
    }
    let mut sizes: Vec<usize> = (0..h.num_nodes() as u32)
        .filter_map(|v| (uf.find(v) == v).then(|| uf.size[v as usize] as usize))
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Portion of nodes in the i-th largest component, as a distribution over
/// component rank (support 1, 2, …).
pub fn connected_component_portions(h: &Hypergraph) -> Distribution {
    Distribution::from_weights(
        component_sizes(h)
            .into_iter()
            .enumerate()
            .map(|(i, s)| (i as u64 + 1, s as f64)),
    )
}
