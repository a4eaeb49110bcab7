//! Seeded synthetic hypergraphs with heavy-tailed degrees, for desk-scale
//! experiments when no real dataset is at hand.
//!
//! Hyperedges are filled one member at a time. With probability
//! `preference` the member is chosen proportionally to its current degree
//! (a uniform pick among all incidences so far), otherwise uniformly among
//! all nodes. Sizes are `min_size` plus a geometric excess, capped at
//! `max_size`.

use std::collections::HashSet;

use rand::Rng;
use rand_distr::{Distribution as _, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub nodes: usize,
    pub edges: usize,
    pub min_size: usize,
    pub mean_size: f64,
    pub max_size: usize,
    pub preference: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    /// 5000 hyperedges over about a thousand nodes, strongly skewed.
    pub fn desk(seed: u64) -> Self {
        SyntheticConfig {
            nodes: 1000,
            edges: 5000,
            min_size: 2,
            mean_size: 3.0,
            max_size: 25,
            preference: 0.9,
            seed,
        }
    }

    /// A quicker instance for unit tests.
    pub fn small(seed: u64) -> Self {
        SyntheticConfig {
            nodes: 300,
            edges: 1000,
            ..Self::desk(seed)
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.into()));
        if self.nodes == 0 || self.edges == 0 {
            return bad("nodes and edges must be positive");
        }
        if self.min_size == 0 || self.max_size < self.min_size || self.max_size > self.nodes {
            return bad("need 1 ≤ min_size ≤ max_size ≤ nodes");
        }
        if !(self.mean_size >= self.min_size as f64) {
            return bad("mean_size must be at least min_size");
        }
        if !(0.0..1.0).contains(&self.preference) {
            return bad("preference must be in [0, 1)");
        }
        Ok(())
    }

    pub fn generate(&self) -> Result<Hypergraph> {
        self.validate()?;
        let mut rng = seed::rng(self.seed);
        let excess = self.mean_size - self.min_size as f64;
        let geometric = Geometric::new(1.0 / (1.0 + excess)).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut incidences: Vec<u32> = Vec::new();
        let mut seen: HashSet<Vec<u32>> = HashSet::with_capacity(self.edges);
        let mut edges: Vec<Vec<u64>> = Vec::with_capacity(self.edges);
        let mut attempts = 0usize;
        while edges.len() < self.edges {
            attempts += 1;
            if attempts > 100 * self.edges {
                return Err(Error::InvalidArgument(
                    "could not generate enough distinct hyperedges; raise nodes or sizes".into(),
                ));
            }
            let size = (self.min_size + geometric.sample(&mut rng) as usize).min(self.max_size);
            let mut members: Vec<u32> = Vec::with_capacity(size);
            while members.len() < size {
                let v = if !incidences.is_empty() && rng.random_bool(self.preference) {
                    incidences[rng.random_range(0..incidences.len())]
                } else {
                    rng.random_range(0..self.nodes as u32)
                };
                if !members.contains(&v) {
                    members.push(v);
                }
            }
            members.sort_unstable();
            if !seen.insert(members.clone()) {
                continue;
            }
            incidences.extend_from_slice(&members);
            edges.push(members.into_iter().map(u64::from).collect());
        }
        Ok(Hypergraph::from_labeled_edges(edges)?.0)
    }
}
