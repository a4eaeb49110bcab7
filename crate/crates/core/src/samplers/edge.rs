use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, InducedTracker, SubHypergraph};
use crate::seed::Rng as SeedRng;

pub(crate) fn check_target(h: &Hypergraph, target: usize) -> Result<()> {
    if target == 0 || target > h.num_edges() {
        return Err(Error::InvalidArgument(format!(
            "target {target} not in 1..={}",
            h.num_edges()
        )));
    }
    Ok(())
}

/// Uniform subset of `target` hyperedges.
pub fn rhs<'g>(h: &'g Hypergraph, target: usize, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    check_target(h, target)?;
    let ids: Vec<EdgeId> = index::sample(rng, h.num_edges(), target)
        .into_iter()
        .map(|i| i as EdgeId)
        .collect();
    SubHypergraph::from_hyperedges(h, &ids)
}

/// Hyperedges not yet chosen, with O(1) uniform draw and removal.
pub(crate) struct Pool {
    items: Vec<EdgeId>,
    pos: Vec<u32>,
}

impl Pool {
    pub(crate) fn full(m: usize) -> Self {
        Pool {
            items: (0..m as EdgeId).collect(),
            pos: (0..m as u32).collect(),
        }
    }

    pub(crate) fn from_ids(m: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut pool = Pool {
            items: Vec::new(),
            pos: vec![u32::MAX; m],
        };
        for e in ids {
            pool.insert(e);
        }
        pool
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.items.len()
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub(crate) fn contains(&self, e: EdgeId) -> bool {
        self.pos[e as usize] != u32::MAX
    }

    pub(crate) fn insert(&mut self, e: EdgeId) {
        if !self.contains(e) {
            self.pos[e as usize] = self.items.len() as u32;
            self.items.push(e);
        }
    }

    pub(crate) fn remove(&mut self, e: EdgeId) -> bool {
        let p = self.pos[e as usize];
        if p == u32::MAX {
            return false;
        }
        self.items.swap_remove(p as usize);
        if let Some(&moved) = self.items.get(p as usize) {
            self.pos[moved as usize] = p;
        }
        self.pos[e as usize] = u32::MAX;
        true
    }

    /// Uniform member, not removed.
    pub(crate) fn pick(&self, rng: &mut SeedRng) -> EdgeId {
        self.items[rng.random_range(0..self.items.len())]
    }

    #[cfg(test)]
    pub(crate) fn items(&self) -> &[EdgeId] {
        &self.items
    }
}

/// Alternates a uniform hyperedge draw with closing the selection under
/// induction on the covered nodes. The final batch is trimmed uniformly to
/// hit the target.
pub fn tihs<'g>(h: &'g Hypergraph, target: usize, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    check_target(h, target)?;
    let mut pool = Pool::full(h.num_edges());
    let mut tracker = InducedTracker::new(h);
    let mut chosen: Vec<EdgeId> = Vec::with_capacity(target);
    let mut induced = Vec::new();
    let mut batch_start = 0;
    while chosen.len() < target {
        let e = pool.pick(rng);
        pool.remove(e);
        batch_start = chosen.len();
        chosen.push(e);
        induced.clear();
        for &v in h.edge(e) {
            tracker.add_node_into(v, &mut induced)?;
        }
        for &f in &induced {
            if pool.remove(f) {
                chosen.push(f);
            }
        }
    }
    let over = chosen.len() - target;
    let mut trimmed = Vec::with_capacity(over);
    if over > 0 {
        let batch = chosen.len() - batch_start;
        let mut drop: Vec<usize> = index::sample(rng, batch, over).into_vec();
        drop.sort_unstable_by(|a, b| b.cmp(a));
        for i in drop {
            trimmed.push(chosen.swap_remove(batch_start + i));
        }
    }
    Ok(SubHypergraph::from_hyperedges(h, &chosen)?.with_trimmed(trimmed))
}
