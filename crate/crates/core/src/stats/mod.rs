//! The ten structural statistics used to compare a sample with its source:
//! degree, hyperedge size, pair degree and intersection size distributions,
//! singular-value spectrum, connected-component portions, clustering
//! coefficient, density, overlapness and effective diameter.

mod clustering;
mod components;
mod diameter;
mod distribution;
mod pairs;
mod spectrum;

use serde::{Deserialize, Serialize};

pub(crate) use clustering::neighbors;
pub(crate) use pairs::pair_key;
pub use clustering::{estimate_clustering_coefficient, exact_clustering_coefficient, global_clustering_coefficient};
pub use components::{component_sizes, connected_component_portions, UnionFind};
pub use diameter::{distance_histogram, effective_diameter, interpolated_percentile};
pub use distribution::{d_statistic, Distribution};
pub use pairs::{intersection_size_distribution, pair_degree_distribution};
pub use spectrum::{rank_proxy, singular_spectrum, singular_spectrum_with, SpectrumMethod, SpectrumStats};


use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::seed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatOptions {
    /// Graphs with at most this many nodes get exact diameter and GCC.
    pub exact_threshold: usize,
    /// Wedge samples for the GCC estimator.
    pub gcc_samples: usize,
    /// BFS sources for the sampled diameter.
    pub diameter_sources: usize,
    /// Spectrum truncation: at most this many singular values.
    pub sv_rank_cap: usize,
    /// Hyperedges above this size are not pair-expanded for pair degrees.
    pub pair_size_cap: usize,
    pub spectrum_method: SpectrumMethod,
    pub seed: u64,
}

impl Default for StatOptions {
    fn default() -> Self {
        StatOptions {
            exact_threshold: 1000,
            gcc_samples: 20_000,
            diameter_sources: 500,
            sv_rank_cap: 300,
            pair_size_cap: 1000,
            spectrum_method: SpectrumMethod::Auto,
            seed: 0,
        }
    }
}

impl StatOptions {
    /// Number of singular values for a hypergraph whose rank proxy is
    /// `rank`. For a sample, `reference_rank` is the source's proxy: when the
    /// source was truncated to the cap, the sample keeps the same fraction of
    /// its own rank.
    pub fn spectrum_k(&self, rank: usize, reference_rank: Option<usize>) -> usize {
        let cap = self.sv_rank_cap.max(1);
        match reference_rank {
            Some(r) if r > cap => {
                let scaled = (cap as f64 * rank as f64 / r as f64).round() as usize;
                scaled.clamp(1, rank.max(1))
            }
            _ => rank.min(cap).max(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatReport {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub degree_dist: Distribution,
    pub size_dist: Distribution,
    pub pair_degree_dist: Distribution,
    pub intersection_size_dist: Distribution,
    pub spectrum: SpectrumStats,
    pub cc_portions: Distribution,
    pub gcc: f64,
    pub density: f64,
    pub overlapness: f64,
    /// `None` when no node pair is connected.
    pub effective_diameter: Option<f64>,
}

impl StatReport {
    pub fn compute(h: &Hypergraph, opts: &StatOptions) -> Result<StatReport> {
        Self::compute_with_reference(h, opts, None)
    }

    /// Report for a sample whose source has rank proxy `reference_rank`.
    pub fn compute_with_reference(h: &Hypergraph, opts: &StatOptions, reference_rank: Option<usize>) -> Result<StatReport> {
        let k = opts.spectrum_k(rank_proxy(h), reference_rank);
        let spectrum = singular_spectrum_with(h, k, opts.spectrum_method)?;
        let effective_diameter = match effective_diameter(
            h,
            opts.exact_threshold,
            opts.diameter_sources,
            seed::derive(opts.seed, 0xd1a),
        ) {
            Ok(d) => Some(d),
            Err(Error::NoReachablePairs) => None,
            Err(e) => return Err(e),
        };
        Ok(StatReport {
            num_nodes: h.num_nodes(),
            num_edges: h.num_edges(),
            degree_dist: degree_distribution(h),
            size_dist: size_distribution(h),
            pair_degree_dist: pair_degree_distribution(h, opts.pair_size_cap, seed::derive(opts.seed, 0x9a1)),
            intersection_size_dist: intersection_size_distribution(h),
            spectrum,
            cc_portions: connected_component_portions(h),
            gcc: global_clustering_coefficient(
                h,
                opts.exact_threshold,
                opts.gcc_samples,
                seed::derive(opts.seed, 0x9cc),
            ),
            density: density(h),
            overlapness: overlapness(h),
            effective_diameter,
        })
    }
}

pub fn degree_distribution(h: &Hypergraph) -> Distribution {
    Distribution::from_values(h.degrees().into_iter().map(|d| d as u64))
}

pub fn size_distribution(h: &Hypergraph) -> Distribution {
    Distribution::from_values(h.edges().map(|e| e.len() as u64))
}

/// |E| / |V|.
pub fn density(h: &Hypergraph) -> f64 {
    h.num_edges() as f64 / h.num_nodes() as f64
}

/// Σ_e |e| / |V|.
pub fn overlapness(h: &Hypergraph) -> f64 {
    h.total_size() as f64 / h.num_nodes() as f64
}
