//! Bias checks for weighted hyperedge sampling.
//!
//! With hyperedge weights ω(e) and exponent α, a single draw picks e with
//! probability ω(e)^α / Σ ω^α. `l(k)` is the probability that the drawn
//! hyperedge touches a node of degree ≤ k, and `h(k) = 1 − l(k)`. Where
//!
//! ```text
//! max over e touching a degree-≤k node of ln ω(e)  <  mean over all e of ln ω(e)
//! ```
//!
//! holds, h(k) increases with α. The condition is downward closed in k, so
//! its largest satisfying k (k*) summarizes it.

use std::io::Write;

use serde::Serialize;

use crate::hypergraph::Hypergraph;
use crate::midas::{hyperedge_weights, WeightMode};

/// Per-hyperedge minimum member degree and log weight, sorted by the
/// former so that E(V_k) is always a prefix.
#[derive(Clone, Debug)]
pub struct BiasModel {
    mode: WeightMode,
    min_degree: Vec<u64>,
    ln_weight: Vec<f64>,
    /// Running maximum of `ln_weight` along the prefix.
    prefix_max: Vec<f64>,
    /// Log of the smallest weight; comparisons are made on deviations from
    /// it so equal weights cancel exactly.
    ln_base: f64,
    /// Mean of ln ω(e) − `ln_base`.
    mean_dev: f64,
    /// {0} ∪ distinct node degrees, ascending.
    domain: Vec<u64>,
}

fn kahan_mean(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp, mut n) = (0.0f64, 0.0f64, 0usize);
    for x in values {
        let y = x - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

impl BiasModel {
    pub fn new(h: &Hypergraph, mode: WeightMode) -> Self {
        let weights = hyperedge_weights(h, mode);
        let mut rows: Vec<(u64, f64)> = h
            .edges()
            .zip(&weights)
            .map(|(e, w)| {
                let min = e.iter().map(|&v| h.degree(v) as u64).min().expect("non-empty hyperedge");
                (min, w.ln())
            })
            .collect();
        rows.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let ln_base = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        let mean_dev = kahan_mean(rows.iter().map(|r| r.1 - ln_base));
        let mut prefix_max = Vec::with_capacity(rows.len());
        let mut running = f64::NEG_INFINITY;
        for &(_, l) in &rows {
            running = running.max(l);
            prefix_max.push(running);
        }
        let mut domain: Vec<u64> = std::iter::once(0).chain(h.degrees().into_iter().map(|d| d as u64)).collect();
        domain.sort_unstable();
        domain.dedup();
        BiasModel {
            mode,
            min_degree: rows.iter().map(|r| r.0).collect(),
            ln_weight: rows.iter().map(|r| r.1).collect(),
            prefix_max,
            ln_base,
            mean_dev,
            domain,
        }
    }

    pub fn mode(&self) -> WeightMode {
        self.mode
    }

    /// {0} ∪ distinct degrees.
    pub fn domain(&self) -> &[u64] {
        &self.domain
    }

    /// |E(V_k)|.
    fn touched(&self, k: u64) -> usize {
        self.min_degree.partition_point(|&d| d <= k)
    }

    /// Whether E(V_k) is empty, which makes the condition hold trivially.
    pub fn is_vacuous(&self, k: u64) -> bool {
        self.touched(k) == 0
    }

    pub fn condition_holds(&self, k: u64) -> bool {
        match self.touched(k) {
            0 => true,
            n => self.prefix_max[n - 1] - self.ln_base < self.mean_dev,
        }
    }

    /// Largest non-vacuous k in the domain satisfying the condition.
    pub fn k_star(&self) -> Option<u64> {
        self.domain
            .iter()
            .rev()
            .copied()
            .find(|&k| !self.is_vacuous(k) && self.condition_holds(k))
    }

    /// l(k) for every k in `ks` at exponent α.
    pub fn low_degree_masses(&self, alpha: f64, ks: &[u64]) -> Vec<f64> {
        if self.ln_weight.is_empty() {
            return vec![0.0; ks.len()];
        }
        let top = self
            .ln_weight
            .iter()
            .map(|l| alpha * l)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut prefix = Vec::with_capacity(self.ln_weight.len() + 1);
        prefix.push(0.0f64);
        let mut sum = 0.0f64;
        for &l in &self.ln_weight {
            sum += (alpha * l - top).exp();
            prefix.push(sum);
        }
        ks.iter().map(|&k| prefix[self.touched(k)] / sum).collect()
    }

    pub fn low_degree_mass(&self, alpha: f64, k: u64) -> f64 {
        self.low_degree_masses(alpha, &[k])[0]
    }

    pub fn profile(&self, alpha: f64) -> BiasProfile {
        let l = self.low_degree_masses(alpha, &self.domain);
        BiasProfile {
            mode: self.mode,
            alpha,
            rows: self
                .domain
                .iter()
                .zip(l)
                .map(|(&k, l)| BiasRow {
                    k,
                    l,
                    h: 1.0 - l,
                    condition: self.condition_holds(k),
                })
                .collect(),
            k_star: self.k_star(),
        }
    }
}

pub fn low_degree_mass(h: &Hypergraph, mode: WeightMode, alpha: f64, k: u64) -> f64 {
    BiasModel::new(h, mode).low_degree_mass(alpha, k)
}

pub fn condition_holds(h: &Hypergraph, mode: WeightMode, k: u64) -> bool {
    BiasModel::new(h, mode).condition_holds(k)
}

pub fn k_star(h: &Hypergraph, mode: WeightMode) -> Option<u64> {
    BiasModel::new(h, mode).k_star()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasRow {
    pub k: u64,
    pub l: f64,
    pub h: f64,
    pub condition: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiasProfile {
    pub mode: WeightMode,
    pub alpha: f64,
    pub rows: Vec<BiasRow>,
    pub k_star: Option<u64>,
}

pub const PROFILE_CSV_HEADER: &str = "mode,alpha,k,l,h,condition,k_star";

impl BiasProfile {
    /// Rows without a header; `k_star` is `none` when no k qualifies.
    pub fn write_csv_rows<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let ks = self.k_star.map_or_else(|| "none".to_string(), |k| k.to_string());
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{},{}", self.mode, self.alpha, r.k, r.l, r.h, r.condition, ks)?;
        }
        Ok(())
    }
}

/// Whether h(k) is non-decreasing along an ascending exponent grid at every
/// k where the condition holds, within `tolerance`.
pub fn h_monotone_where_condition_holds(model: &BiasModel, grid: &[f64], tolerance: f64) -> bool {
    let ks: Vec<u64> = model
        .domain()
        .iter()
        .copied()
        .filter(|&k| !model.is_vacuous(k) && model.condition_holds(k))
        .collect();
    let hs: Vec<Vec<f64>> = grid
        .iter()
        .map(|&a| model.low_degree_masses(a, &ks).into_iter().map(|l| 1.0 - l).collect())
        .collect();
    hs.windows(2)
        .all(|w| w[0].iter().zip(&w[1]).all(|(a, b)| *b >= *a - tolerance))
}
