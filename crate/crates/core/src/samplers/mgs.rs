//! Metropolis search over hyperedge subsets. A proposal changing the
//! objective from Δ to Δ′ is accepted with probability
//! min(1, exp(k·(Δ − Δ′))).

use std::collections::HashMap;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::edge::{check_target, Pool};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, SubHypergraph};
use crate::seed::Rng as SeedRng;
use crate::stats::{pair_key, Distribution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MgsObjective {
    /// Degree D-statistic.
    Deg,
    /// Mean of the degree, size, pair-degree and intersection-size
    /// D-statistics.
    Avg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MgsMove {
    Add,
    Replace,
    Delete,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MgsConfig {
    pub objective: MgsObjective,
    pub moves: MgsMove,
    pub temperature: f64,
    pub replace_steps: usize,
    /// Hyperedges larger than this are left out of the pair-degree term.
    pub pair_size_cap: usize,
}

impl MgsConfig {
    pub const TEMPERATURES: [f64; 4] = [1.0, 10.0, 100.0, 10_000.0];

    pub fn new(objective: MgsObjective, moves: MgsMove) -> Self {
        MgsConfig {
            objective,
            moves,
            temperature: 100.0,
            replace_steps: 3000,
            pair_size_cap: 1000,
        }
    }

    pub fn name(&self) -> String {
        let o = match self.objective {
            MgsObjective::Deg => "deg",
            MgsObjective::Avg => "avg",
        };
        let m = match self.moves {
            MgsMove::Add => "add",
            MgsMove::Replace => "rep",
            MgsMove::Delete => "del",
        };
        if self.temperature == 100.0 {
            format!("mgs-{o}-{m}")
        } else {
            format!("mgs-{o}-{m}@{}", self.temperature)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature > 0.0 && self.temperature.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "temperature must be positive, got {}",
                self.temperature
            )));
        }
        Ok(())
    }
}

/// Parses `mgs-{deg|avg}-{add|rep|del}`.
impl FromStr for MgsConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("unknown MGS variant {s:?}"));
        let rest = s.strip_prefix("mgs-").ok_or_else(bad)?;
        let (o, m) = rest.split_once('-').ok_or_else(bad)?;
        let objective = match o {
            "deg" => MgsObjective::Deg,
            "avg" => MgsObjective::Avg,
            _ => return Err(bad()),
        };
        let moves = match m {
            "add" => MgsMove::Add,
            "rep" | "replace" => MgsMove::Replace,
            "del" | "delete" => MgsMove::Delete,
            _ => return Err(bad()),
        };
        Ok(MgsConfig::new(objective, moves))
    }
}

pub fn acceptance_probability(delta: f64, proposed: f64, temperature: f64) -> f64 {
    (temperature * (delta - proposed)).exp().min(1.0)
}

#[derive(Clone, Debug, Default)]
struct Histogram {
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    fn bump(&mut self, k: usize) {
        if self.counts.len() <= k {
            self.counts.resize(k + 1, 0);
        }
        self.counts[k] += 1;
        self.total += 1;
    }

    fn drop(&mut self, k: usize) {
        self.counts[k] -= 1;
        self.total -= 1;
    }

    fn to_distribution(&self) -> Distribution {
        Distribution::from_histogram(&self.counts)
    }

    /// D-statistic against `reference`; an empty side counts as 1 unless
    /// both are empty.
    fn distance(&self, reference: &Distribution) -> f64 {
        match (self.total == 0, reference.is_empty()) {
            (true, true) => return 0.0,
            (true, false) | (false, true) => return 1.0,
            _ => {}
        }
        let (support, cum) = (reference.support(), reference.cumulative());
        let next_nonzero = |from: usize| (from..self.counts.len()).find(|&k| self.counts[k] > 0);
        let (mut i, mut j) = (0usize, next_nonzero(0));
        let (mut fa, mut fb, mut gap) = (0.0f64, 0.0f64, 0.0f64);
        let mut running = 0u64;
        let total = self.total as f64;
        while i < support.len() || j.is_some() {
            let xa = support.get(i).copied().unwrap_or(u64::MAX);
            let xb = j.map_or(u64::MAX, |k| k as u64);
            let x = xa.min(xb);
            if xa == x {
                fa = cum[i];
                i += 1;
            }
            if xb == x {
                let k = j.expect("xb finite");
                running += self.counts[k];
                fb = if running == self.total { 1.0 } else { running as f64 / total };
                j = next_nonzero(k + 1);
            }
            gap = gap.max((fa - fb).abs());
        }
        gap
    }
}

/// Degree, size, pair-degree and intersection-size histograms of the
/// current selection, updated per added or removed hyperedge.
struct State<'g> {
    graph: &'g Hypergraph,
    full: bool,
    cap: usize,
    selected: Vec<bool>,
    count: usize,
    degree: Vec<u32>,
    pairs: HashMap<u64, u32>,
    overlap: Vec<u32>,
    touched: Vec<EdgeId>,
    hists: [Histogram; 4],
}

impl<'g> State<'g> {
    fn new(graph: &'g Hypergraph, full: bool, cap: usize) -> Self {
        State {
            graph,
            full,
            cap,
            selected: vec![false; graph.num_edges()],
            count: 0,
            degree: vec![0; graph.num_nodes()],
            pairs: HashMap::new(),
            overlap: vec![0; graph.num_edges()],
            touched: Vec::new(),
            hists: Default::default(),
        }
    }

    fn with_edges(graph: &'g Hypergraph, full: bool, cap: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut s = Self::new(graph, full, cap);
        for e in ids {
            s.toggle(e, true);
        }
        s
    }

    fn toggle(&mut self, e: EdgeId, add: bool) {
        debug_assert_ne!(self.selected[e as usize], add);
        let members = self.graph.edge(e);
        let [deg_h, size_h, pair_h, int_h] = &mut self.hists;
        for &v in members {
            let d = &mut self.degree[v as usize];
            if *d > 0 {
                deg_h.drop(*d as usize);
            }
            if add {
                *d += 1;
            } else {
                *d -= 1;
            }
            if *d > 0 {
                deg_h.bump(*d as usize);
            }
        }
        if add {
            size_h.bump(members.len());
        } else {
            size_h.drop(members.len());
        }
        if self.full {
            if members.len() <= self.cap {
                for (i, &u) in members.iter().enumerate() {
                    for &v in &members[i + 1..] {
                        let key = pair_key(u, v);
                        let c = self.pairs.entry(key).or_insert(0);
                        if *c > 0 {
                            pair_h.drop(*c as usize);
                        }
                        if add {
                            *c += 1;
                        } else {
                            *c -= 1;
                        }
                        if *c > 0 {
                            pair_h.bump(*c as usize);
                        } else {
                            self.pairs.remove(&key);
                        }
                    }
                }
            }
            for &v in members {
                for &f in self.graph.incident(v) {
                    if f != e && self.selected[f as usize] {
                        if self.overlap[f as usize] == 0 {
                            self.touched.push(f);
                        }
                        self.overlap[f as usize] += 1;
                    }
                }
            }
            for f in self.touched.drain(..) {
                let k = std::mem::take(&mut self.overlap[f as usize]) as usize;
                if add {
                    int_h.bump(k);
                } else {
                    int_h.drop(k);
                }
            }
        }
        self.selected[e as usize] = add;
        if add {
            self.count += 1;
        } else {
            self.count -= 1;
        }
    }

    fn objective(&self, reference: &[Distribution; 4]) -> f64 {
        if self.full {
            self.hists
                .iter()
                .zip(reference)
                .map(|(h, r)| h.distance(r))
                .sum::<f64>()
                / 4.0
        } else {
            self.hists[0].distance(&reference[0])
        }
    }

    fn distributions(&self) -> [Distribution; 4] {
        std::array::from_fn(|i| self.hists[i].to_distribution())
    }

    fn selected_ids(&self) -> Vec<EdgeId> {
        (0..self.selected.len() as EdgeId)
            .filter(|&e| self.selected[e as usize])
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct MgsOutcome<'g> {
    pub sub: SubHypergraph<'g>,
    pub objective: f64,
    pub proposals: usize,
    pub accepted: usize,
    pub acceptance_rate: f64,
    /// Acceptances forced by the stall cap.
    pub forced_accepts: usize,
}

struct Chain<'a> {
    reference: [Distribution; 4],
    temperature: f64,
    delta: f64,
    proposals: usize,
    accepted: usize,
    forced: usize,
    on_accept: Option<&'a mut dyn FnMut(&State<'_>, f64)>,
}

impl Chain<'_> {
    fn decide(&mut self, proposed: f64, rng: &mut SeedRng) -> bool {
        self.proposals += 1;
        let p = acceptance_probability(self.delta, proposed, self.temperature);
        let ok = p >= 1.0 || rng.random::<f64>() < p;
        if ok {
            self.accepted += 1;
            self.delta = proposed;
        }
        ok
    }

    fn notify(&mut self, state: &State<'_>) {
        if let Some(f) = self.on_accept.as_mut() {
            f(state, self.delta);
        }
    }
}

pub fn mgs<'g>(h: &'g Hypergraph, target: usize, cfg: &MgsConfig, rng: &mut SeedRng) -> Result<MgsOutcome<'g>> {
    run(h, target, cfg, rng, None)
}

/// Grows (Add) or shrinks (Delete) one hyperedge at a time. After
/// 50·target consecutive rejections the best proposal of the streak is
/// forced through.
fn monotone(state: &mut State<'_>, pool: &mut Pool, add: bool, target: usize, chain: &mut Chain<'_>, rng: &mut SeedRng) {
    let stall_cap = 50 * target.max(1);
    let mut streak = 0usize;
    let mut best: Option<(EdgeId, f64)> = None;
    while state.count != target {
        let e = pool.pick(rng);
        state.toggle(e, add);
        let proposed = state.objective(&chain.reference);
        if chain.decide(proposed, rng) {
            pool.remove(e);
            streak = 0;
            best = None;
            chain.notify(state);
            continue;
        }
        state.toggle(e, !add);
        if best.is_none_or(|(_, b)| proposed < b) {
            best = Some((e, proposed));
        }
        streak += 1;
        if streak >= stall_cap {
            let (e, d) = best.take().expect("a proposal was rejected");
            state.toggle(e, add);
            pool.remove(e);
            chain.delta = d;
            chain.forced += 1;
            chain.accepted += 1;
            streak = 0;
            chain.notify(state);
        }
    }
}

fn run<'g>(
    h: &'g Hypergraph,
    target: usize,
    cfg: &MgsConfig,
    rng: &mut SeedRng,
    on_accept: Option<&mut dyn FnMut(&State<'_>, f64)>,
) -> Result<MgsOutcome<'g>> {
    check_target(h, target)?;
    cfg.validate()?;
    let full = cfg.objective == MgsObjective::Avg;
    let m = h.num_edges();
    let reference = State::with_edges(h, true, cfg.pair_size_cap, 0..m as EdgeId).distributions();
    let mut chain = Chain {
        reference,
        temperature: cfg.temperature,
        delta: 0.0,
        proposals: 0,
        accepted: 0,
        forced: 0,
        on_accept,
    };
    let state = match cfg.moves {
        MgsMove::Add => {
            let mut state = State::new(h, full, cfg.pair_size_cap);
            chain.delta = state.objective(&chain.reference);
            let mut outside = Pool::full(m);
            monotone(&mut state, &mut outside, true, target, &mut chain, rng);
            state
        }
        MgsMove::Delete => {
            let mut state = State::with_edges(h, full, cfg.pair_size_cap, 0..m as EdgeId);
            chain.delta = state.objective(&chain.reference);
            let mut inside = Pool::full(m);
            monotone(&mut state, &mut inside, false, target, &mut chain, rng);
            state
        }
        MgsMove::Replace => {
            let init: Vec<EdgeId> = index::sample(rng, m, target).into_iter().map(|i| i as EdgeId).collect();
            let mut state = State::with_edges(h, full, cfg.pair_size_cap, init.iter().copied());
            chain.delta = state.objective(&chain.reference);
            let mut inside = Pool::from_ids(m, init.iter().copied());
            let mut outside = Pool::from_ids(m, (0..m as EdgeId).filter(|&e| !state.selected[e as usize]));
            if !outside.is_empty() {
                for _ in 0..cfg.replace_steps {
                    let (e, f) = (inside.pick(rng), outside.pick(rng));
                    state.toggle(e, false);
                    state.toggle(f, true);
                    let proposed = state.objective(&chain.reference);
                    if chain.decide(proposed, rng) {
                        inside.remove(e);
                        outside.remove(f);
                        inside.insert(f);
                        outside.insert(e);
                        chain.notify(&state);
                    } else {
                        state.toggle(f, false);
                        state.toggle(e, true);
                    }
                }
            }
            state
        }
    };
    let sub = SubHypergraph::from_hyperedges(h, &state.selected_ids())?;
    Ok(MgsOutcome {
        sub,
        objective: chain.delta,
        proposals: chain.proposals,
        accepted: chain.accepted,
        acceptance_rate: if chain.proposals == 0 {
            1.0
        } else {
            (chain.accepted - chain.forced) as f64 / chain.proposals as f64
        },
        forced_accepts: chain.forced,
    })
}
