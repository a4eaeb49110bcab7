//! Degree-biased hyperedge sampling.
//!
//! Each hyperedge is weighted by ω(e), by default the smallest degree among
//! its members, and hyperedges are drawn without replacement with probability
//! proportional to ω(e)^α. Larger α favours hyperedges whose members all
//! have high degree. [`midas`] picks α automatically: a regressor on degree
//! skewness and portion gives a starting point, then a hill climb over a grid
//! minimizes the degree-distribution distance of a trial sample.

mod index;
mod regressor;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use index::{Weight, WeightedIndex};
pub use regressor::{fit_regressor, Observation, RegressorModel};
pub use search::{coarse_grid, default_grid, grid_search, hill_climb, SearchResult};

pub(crate) use search::validate_grid;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, SubHypergraph};
use crate::samplers::target_size;
use crate::seed;
use crate::stats::{d_statistic, degree_distribution, Distribution};

/// How member degrees are combined into a hyperedge weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    #[default]
    Min,
    Max,
    Avg,
}

impl WeightMode {
    pub const ALL: [WeightMode; 3] = [WeightMode::Min, WeightMode::Max, WeightMode::Avg];

    pub fn name(self) -> &'static str {
        match self {
            WeightMode::Min => "min",
            WeightMode::Max => "max",
            WeightMode::Avg => "avg",
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WeightMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        WeightMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown weight mode {s:?} (min, max, avg)")))
    }
}

pub fn hyperedge_weights(h: &Hypergraph, mode: WeightMode) -> Vec<Weight> {
    h.edges()
        .map(|e| {
            let degrees = e.iter().map(|&v| h.degree(v) as u64);
            match mode {
                WeightMode::Min => Weight::integer(degrees.min().expect("non-empty hyperedge")),
                WeightMode::Max => Weight::integer(degrees.max().expect("non-empty hyperedge")),
                WeightMode::Avg => Weight::ratio(degrees.sum(), e.len() as u64),
            }
        })
        .collect()
}

/// Population skewness of the node degrees; 0 when all degrees are equal.
pub fn skewness(h: &Hypergraph) -> f64 {
    let d: Vec<f64> = h.degrees().into_iter().map(|x| x as f64).collect();
    skewness_of(&d)
}

pub fn skewness_of(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3) = (0.0, 0.0);
    for &x in values {
        let c = x - mean;
        m2 += c * c;
        m3 += c * c * c;
    }
    m2 /= n;
    m3 /= n;
    if m2 <= 0.0 {
        return 0.0;
    }
    m3 / m2.powf(1.5)
}

/// Draws `target` hyperedge IDs without replacement with probability
/// proportional to ω(e)^α.
pub fn draw_weighted(weights: &[Weight], target: usize, alpha: f64, rng: &mut seed::Rng) -> Result<Vec<EdgeId>> {
    if target > weights.len() {
        return Err(Error::InvalidArgument(format!(
            "target {target} exceeds {} hyperedges",
            weights.len()
        )));
    }
    let mut index = WeightedIndex::new(weights, alpha)?;
    (0..target).map(|_| index.draw(rng)).collect()
}

/// Single run with a fixed exponent.
pub fn midas_basic<'g>(
    h: &'g Hypergraph,
    portion: f64,
    alpha: f64,
    mode: WeightMode,
    seed: u64,
) -> Result<SubHypergraph<'g>> {
    let target = target_size(h, portion)?;
    let edges = draw_weighted(&hyperedge_weights(h, mode), target, alpha, &mut seed::rng(seed))?;
    SubHypergraph::from_hyperedges(h, &edges)
}

/// D-statistic between the degree distribution of `G` and that of the
/// sub-hypergraph formed by a set of its hyperedges.
pub struct DegreeLoss<'g> {
    graph: &'g Hypergraph,
    reference: Distribution,
    counts: Vec<u32>,
}

impl<'g> DegreeLoss<'g> {
    pub fn new(graph: &'g Hypergraph) -> Self {
        DegreeLoss {
            graph,
            reference: degree_distribution(graph),
            counts: vec![0; graph.num_nodes()],
        }
    }

    pub fn reference(&self) -> &Distribution {
        &self.reference
    }

    pub fn of_edges(&mut self, edges: &[EdgeId]) -> f64 {
        let mut touched = Vec::new();
        for &e in edges {
            for &v in self.graph.edge(e) {
                if self.counts[v as usize] == 0 {
                    touched.push(v);
                }
                self.counts[v as usize] += 1;
            }
        }
        let sample = Distribution::from_values(touched.iter().map(|&v| u64::from(self.counts[v as usize])));
        for &v in &touched {
            self.counts[v as usize] = 0;
        }
        d_statistic(&self.reference, &sample).unwrap_or(1.0)
    }
}

/// Seed of the trial sample that backs the loss at exponent `alpha`.
pub fn alpha_seed(loss_seed: u64, alpha: f64) -> u64 {
    seed::stable_hash([&loss_seed.to_le_bytes()[..], &alpha.to_bits().to_le_bytes()[..]])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MidasParams {
    pub mode: WeightMode,
    pub grid: Vec<f64>,
    pub model: RegressorModel,
}

impl Default for MidasParams {
    fn default() -> Self {
        MidasParams {
            mode: WeightMode::Min,
            grid: default_grid(),
            model: RegressorModel::PUBLISHED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MidasOutcome {
    pub edges: Vec<EdgeId>,
    pub skewness: f64,
    /// Regressor output before the search; `None` for pure grid search.
    pub alpha_initial: Option<f64>,
    pub alpha: f64,
    pub loss: f64,
    pub evaluations: usize,
    pub trace: Vec<(f64, f64)>,
}

/// Loss landscape over exponents for one (G, portion, mode, seed).
pub struct Landscape<'g> {
    weights: Vec<Weight>,
    target: usize,
    loss: DegreeLoss<'g>,
    seed: u64,
}

impl<'g> Landscape<'g> {
    pub fn new(h: &'g Hypergraph, portion: f64, mode: WeightMode, seed: u64) -> Result<Self> {
        Ok(Landscape {
            weights: hyperedge_weights(h, mode),
            target: target_size(h, portion)?,
            loss: DegreeLoss::new(h),
            seed,
        })
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn sample(&self, alpha: f64) -> Result<Vec<EdgeId>> {
        draw_weighted(&self.weights, self.target, alpha, &mut seed::rng(alpha_seed(self.seed, alpha)))
    }

    pub fn loss(&mut self, alpha: f64) -> Result<f64> {
        let edges = self.sample(alpha)?;
        Ok(self.loss.of_edges(&edges))
    }

    fn run(&mut self, search: impl FnOnce(&mut dyn FnMut(f64) -> f64) -> SearchResult) -> Result<SearchResult> {
        let mut failure = None;
        let result = search(&mut |a| match self.loss(a) {
            Ok(l) => l,
            Err(e) => {
                failure.get_or_insert(e);
                f64::INFINITY
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(result),
        }
    }

    pub fn hill_climb(&mut self, grid: &[f64], start: f64) -> Result<SearchResult> {
        self.run(|f| hill_climb(grid, start, f))
    }

    pub fn grid_search(&mut self, grid: &[f64]) -> Result<SearchResult> {
        self.run(|f| grid_search(grid, f))
    }
}

/// Automatic-exponent sampling: regressor start, hill climb, final draw with
/// the chosen exponent (the same draw that produced its loss).
pub fn midas(h: &Hypergraph, portion: f64, params: &MidasParams, seed: u64) -> Result<MidasOutcome> {
    validate_grid(&params.grid)?;
    let s = skewness(h);
    let (lo, hi) = (params.grid[0], *params.grid.last().expect("non-empty grid"));
    let start = params.model.predict(s, portion, lo, hi);
    let mut land = Landscape::new(h, portion, params.mode, seed)?;
    let found = land.hill_climb(&params.grid, start)?;
    log::debug!(
        "midas: skewness {s:.4}, start {start:.4}, chose {} after {} evaluations",
        found.alpha,
        found.evaluations
    );
    Ok(MidasOutcome {
        edges: land.sample(found.alpha)?,
        skewness: s,
        alpha_initial: Some(start),
        alpha: found.alpha,
        loss: found.loss,
        evaluations: found.evaluations,
        trace: found.trace,
    })
}

/// Exhaustive grid tuning of the exponent for a given weight mode.
pub fn midas_grid(h: &Hypergraph, portion: f64, mode: WeightMode, grid: &[f64], seed: u64) -> Result<MidasOutcome> {
    validate_grid(grid)?;
    let mut land = Landscape::new(h, portion, mode, seed)?;
    let found = land.grid_search(grid)?;
    Ok(MidasOutcome {
        edges: land.sample(found.alpha)?,
        skewness: skewness(h),
        alpha_initial: None,
        alpha: found.alpha,
        loss: found.loss,
        evaluations: found.evaluations,
        trace: found.trace,
    })
}
