use std::collections::VecDeque;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution as _, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, InducedTracker, NodeId, SubHypergraph};
use crate::midas::{grid_search, DegreeLoss, WeightedIndex};
use crate::seed::{self, Rng as SeedRng};
use crate::stats::neighbors;

/// Feeds drawn nodes into an induced-hyperedge tracker and trims the final
/// batch down to the exact target.
struct Driver<'g> {
    graph: &'g Hypergraph,
    tracker: InducedTracker<'g>,
    target: usize,
    edges: Vec<EdgeId>,
    last_batch: usize,
}

impl<'g> Driver<'g> {
    fn new(graph: &'g Hypergraph, target: usize) -> Result<Self> {
        if target == 0 || target > graph.num_edges() {
            return Err(Error::InvalidArgument(format!(
                "target {target} not in 1..={}",
                graph.num_edges()
            )));
        }
        Ok(Driver {
            graph,
            tracker: InducedTracker::new(graph),
            target,
            edges: Vec::with_capacity(target),
            last_batch: 0,
        })
    }

    fn done(&self) -> bool {
        self.edges.len() >= self.target
    }

    fn contains(&self, v: NodeId) -> bool {
        self.tracker.contains(v)
    }

    /// Adds `v`; returns true once the target is reached.
    fn add(&mut self, v: NodeId) -> bool {
        let before = self.edges.len();
        self.tracker
            .add_node_into(v, &mut self.edges)
            .expect("drawn node belongs to the graph");
        if self.edges.len() > before {
            self.last_batch = self.edges.len() - before;
        }
        self.done()
    }

    fn finish(mut self, rng: &mut SeedRng) -> SubHypergraph<'g> {
        assert!(self.done(), "node supply exhausted before reaching the target");
        let over = self.edges.len() - self.target;
        let mut trimmed = Vec::with_capacity(over);
        if over > 0 {
            let start = self.edges.len() - self.last_batch;
            let mut drop: Vec<usize> = index::sample(rng, self.last_batch, over).into_vec();
            drop.sort_unstable_by(|a, b| b.cmp(a));
            for i in drop {
                trimmed.push(self.edges.swap_remove(start + i));
            }
        }
        SubHypergraph::from_node_selection(self.graph, self.tracker.into_nodes(), self.edges, trimmed)
    }
}

/// Uniform node order, drawn lazily.
struct Shuffle {
    order: Vec<NodeId>,
    next: usize,
}

impl Shuffle {
    fn new(n: usize) -> Self {
        Shuffle {
            order: (0..n as NodeId).collect(),
            next: 0,
        }
    }

    fn draw(&mut self, rng: &mut SeedRng) -> Option<NodeId> {
        if self.next == self.order.len() {
            return None;
        }
        let j = rng.random_range(self.next..self.order.len());
        self.order.swap(self.next, j);
        self.next += 1;
        Some(self.order[self.next - 1])
    }
}

pub fn rns<'g>(h: &'g Hypergraph, target: usize, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    let mut d = Driver::new(h, target)?;
    let mut order = Shuffle::new(h.num_nodes());
    while let Some(v) = order.draw(rng) {
        if d.add(v) {
            break;
        }
    }
    Ok(d.finish(rng))
}

/// Nodes drawn without replacement with probability proportional to
/// degree^α.
fn weighted_nodes<'g>(h: &'g Hypergraph, target: usize, alpha: f64, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    let mut d = Driver::new(h, target)?;
    let degrees: Vec<u64> = h.degrees().into_iter().map(|x| x as u64).collect();
    let mut index = WeightedIndex::from_integers(&degrees, alpha)?;
    while !index.is_empty() {
        if d.add(index.draw(rng)?) {
            break;
        }
    }
    Ok(d.finish(rng))
}

pub fn rdn<'g>(h: &'g Hypergraph, target: usize, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    weighted_nodes(h, target, 1.0, rng)
}

/// Degree^α node selection.
pub fn midas_ns<'g>(h: &'g Hypergraph, target: usize, alpha: f64, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    weighted_nodes(h, target, alpha, rng)
}

/// Degree^α node selection with α chosen by grid search on the degree
/// D-statistic, one trial sample per grid point.
pub(crate) fn midas_ns_tuned<'g>(
    h: &'g Hypergraph,
    target: usize,
    grid: &[f64],
    seed: u64,
) -> Result<(f64, SubHypergraph<'g>)> {
    crate::midas::validate_grid(grid)?;
    let mut loss = DegreeLoss::new(h);
    let mut failure = None;
    let found = grid_search(grid, |a| {
        match weighted_nodes(h, target, a, &mut seed::rng(crate::midas::alpha_seed(seed, a))) {
            Ok(sub) => loss.of_edges(sub.edge_ids()),
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let sub = weighted_nodes(h, target, found.alpha, &mut seed::rng(crate::midas::alpha_seed(seed, found.alpha)))?;
    Ok((found.alpha, sub))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RwConfig {
    /// Probability of jumping back to the seed node at each step.
    pub restart: f64,
    /// Step to a uniform distinct neighbour instead of via a uniform
    /// incident hyperedge.
    pub distinct_neighbors: bool,
}

impl Default for RwConfig {
    fn default() -> Self {
        RwConfig {
            restart: 0.15,
            distinct_neighbors: false,
        }
    }
}

/// Uniform member of a uniformly chosen incident non-singleton hyperedge,
/// other than `v`.
fn hyperedge_step(h: &Hypergraph, v: NodeId, rng: &mut SeedRng) -> Option<NodeId> {
    let inc = h.incident(v);
    let usable = inc.iter().filter(|&&e| h.edge(e).len() > 1).count();
    if usable == 0 {
        return None;
    }
    let k = rng.random_range(0..usable);
    let e = *inc.iter().filter(|&&e| h.edge(e).len() > 1).nth(k).expect("k < usable");
    let members = h.edge(e);
    let pos = members.binary_search(&v).expect("v is a member");
    let mut j = rng.random_range(0..members.len() - 1);
    if j >= pos {
        j += 1;
    }
    Some(members[j])
}

/// Random walk with restart on the clique expansion. A new uniform seed
/// node is chosen every |V| steps (all steps count, restarts included).
pub fn rw<'g>(h: &'g Hypergraph, target: usize, cfg: &RwConfig, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    if !(0.0..=1.0).contains(&cfg.restart) {
        return Err(Error::InvalidArgument(format!("restart probability {} not in [0, 1]", cfg.restart)));
    }
    let mut d = Driver::new(h, target)?;
    let n = h.num_nodes();
    let budget = n.max(1);
    let mut seed_node = rng.random_range(0..n as NodeId);
    let mut current = seed_node;
    let mut steps = 0usize;
    if !d.add(seed_node) {
        loop {
            if steps >= budget {
                seed_node = rng.random_range(0..n as NodeId);
                current = seed_node;
                steps = 0;
                if d.add(seed_node) {
                    break;
                }
                continue;
            }
            steps += 1;
            if rng.random_bool(cfg.restart) {
                current = seed_node;
                continue;
            }
            let next = if cfg.distinct_neighbors {
                let nbrs = neighbors(h, current);
                (!nbrs.is_empty()).then(|| nbrs[rng.random_range(0..nbrs.len())])
            } else {
                hyperedge_step(h, current, rng)
            };
            match next {
                Some(u) => {
                    current = u;
                    if d.add(u) {
                        break;
                    }
                }
                None => current = seed_node,
            }
        }
    }
    Ok(d.finish(rng))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FfConfig {
    /// Fan-out at the ambassador is geometric with mean p/(1−p).
    pub p: f64,
    /// Fan-out at every other burning node, mean q/(1−q).
    pub q: f64,
}

impl Default for FfConfig {
    fn default() -> Self {
        FfConfig { p: 0.51, q: 0.2 }
    }
}

/// Geometric on {0, 1, …} with the given mean ratio r, i.e. mean r/(1−r).
pub(crate) fn fan_out(r: f64) -> Result<Geometric> {
    Geometric::new(1.0 - r).map_err(|e| Error::InvalidArgument(format!("forest fire parameter {r}: {e}")))
}

/// Forest fire over clique-expansion neighbours. When a fire dies out a
/// new ambassador is drawn uniformly among unburned nodes.
pub fn ff<'g>(h: &'g Hypergraph, target: usize, cfg: &FfConfig, rng: &mut SeedRng) -> Result<SubHypergraph<'g>> {
    if !(0.0..1.0).contains(&cfg.p) || !(0.0..1.0).contains(&cfg.q) {
        return Err(Error::InvalidArgument("forest fire p and q must be in [0, 1)".into()));
    }
    let (first, rest) = (fan_out(cfg.p)?, fan_out(cfg.q)?);
    let mut d = Driver::new(h, target)?;
    let mut order = Shuffle::new(h.num_nodes());
    let mut queue: VecDeque<(NodeId, bool)> = VecDeque::new();
    'outer: while let Some(w) = order.draw(rng) {
        if d.contains(w) {
            continue;
        }
        if d.add(w) {
            break;
        }
        queue.clear();
        queue.push_back((w, true));
        while let Some((x, ambassador)) = queue.pop_front() {
            let n = if ambassador { first.sample(rng) } else { rest.sample(rng) } as usize;
            if n == 0 {
                continue;
            }
            let fresh: Vec<NodeId> = neighbors(h, x).into_iter().filter(|&u| !d.contains(u)).collect();
            let take = n.min(fresh.len());
            for i in index::sample(rng, fresh.len(), take) {
                let u = fresh[i];
                if d.add(u) {
                    break 'outer;
                }
                queue.push_back((u, false));
            }
        }
    }
    Ok(d.finish(rng))
}
