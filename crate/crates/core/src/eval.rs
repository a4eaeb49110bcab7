//! Distances between a hypergraph and a sample, and the rank / Z-score
//! aggregation used to compare sampling methods across settings.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::stats::{rank_proxy, StatOptions, StatReport};

pub use crate::stats::d_statistic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Degree,
    Size,
    PairDegree,
    IntersectionSize,
    SingularValues,
    ConnectedComponents,
    Gcc,
    Density,
    Overlapness,
    Diameter,
}

impl Statistic {
    pub const ALL: [Statistic; 10] = [
        Statistic::Degree,
        Statistic::Size,
        Statistic::PairDegree,
        Statistic::IntersectionSize,
        Statistic::SingularValues,
        Statistic::ConnectedComponents,
        Statistic::Gcc,
        Statistic::Density,
        Statistic::Overlapness,
        Statistic::Diameter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Degree => "degree",
            Statistic::Size => "size",
            Statistic::PairDegree => "pair_degree",
            Statistic::IntersectionSize => "intersection_size",
            Statistic::SingularValues => "singular_values",
            Statistic::ConnectedComponents => "connected_components",
            Statistic::Gcc => "gcc",
            Statistic::Density => "density",
            Statistic::Overlapness => "overlapness",
            Statistic::Diameter => "diameter",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Distribution statistics are compared with the D-statistic, the
    /// scalar ones with a relative difference.
    pub fn is_distribution(self) -> bool {
        self.index() < 6
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown statistic {s:?}")))
    }
}

/// Why a distance entry was set by policy rather than measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// The sample's statistic is empty or undefined while the original's is
    /// not; distance set to 1.
    SampleUndefined,
    /// Undefined on both sides; distance set to 0.
    BothUndefined,
    /// The original's scalar is 0 so the relative difference is undefined;
    /// distance is 0 if the sample matches and 1 otherwise.
    ZeroReference,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceVector {
    pub distances: [f64; 10],
    pub flags: [Option<Flag>; 10],
}

impl DistanceVector {
    pub fn get(&self, stat: Statistic) -> f64 {
        self.distances[stat.index()]
    }

    pub fn flag(&self, stat: Statistic) -> Option<Flag> {
        self.flags[stat.index()]
    }

    /// Named view for JSON output.
    pub fn to_json(&self) -> serde_json::Value {
        let mut distances = serde_json::Map::new();
        let mut flags = serde_json::Map::new();
        for st in Statistic::ALL {
            distances.insert(st.name().into(), self.get(st).into());
            if let Some(f) = self.flag(st) {
                flags.insert(st.name().into(), serde_json::to_value(f).expect("flag serializes"));
            }
        }
        serde_json::json!({ "distances": distances, "flags": flags })
    }
}

/// |y − ŷ| / |y|.
pub fn relative_difference(y: f64, y_hat: f64) -> Result<f64> {
    if y == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((y - y_hat).abs() / y.abs())
}

/// D-statistic between two index-ordered sequences (relative variances),
/// comparing their running sums position by position. The shorter sequence's
/// running sum stays at its final value past its end.
pub fn sequence_gap(a: &[f64], b: &[f64]) -> f64 {
    let (mut fa, mut fb, mut gap) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..a.len().max(b.len()) {
        if let Some(x) = a.get(i) {
            fa += x;
        }
        if let Some(x) = b.get(i) {
            fb += x;
        }
        gap = gap.max((fa - fb).abs());
    }
    gap
}

/// Distances of `sample` from `original` using precomputed reports.
pub fn compare_reports(original: &StatReport, sample: &StatReport) -> DistanceVector {
    let mut distances = [0.0; 10];
    let mut flags = [None; 10];
    let dists = [
        (&original.degree_dist, &sample.degree_dist),
        (&original.size_dist, &sample.size_dist),
        (&original.pair_degree_dist, &sample.pair_degree_dist),
        (&original.intersection_size_dist, &sample.intersection_size_dist),
    ];
    for (i, (a, b)) in dists.into_iter().enumerate() {
        (distances[i], flags[i]) = match (a.is_empty(), b.is_empty()) {
            (false, false) => (d_statistic(a, b).expect("both non-empty"), None),
            (true, true) => (0.0, Some(Flag::BothUndefined)),
            _ => (1.0, Some(Flag::SampleUndefined)),
        };
    }
    distances[4] = sequence_gap(&original.spectrum.rel_variance, &sample.spectrum.rel_variance);
    distances[5] = d_statistic(&original.cc_portions, &sample.cc_portions).unwrap_or(1.0);

    let scalars = [
        (Some(original.gcc), Some(sample.gcc)),
        (Some(original.density), Some(sample.density)),
        (Some(original.overlapness), Some(sample.overlapness)),
        (original.effective_diameter, sample.effective_diameter),
    ];
    for (offset, pair) in scalars.into_iter().enumerate() {
        let i = 6 + offset;
        (distances[i], flags[i]) = match pair {
            (Some(y), Some(y_hat)) => match relative_difference(y, y_hat) {
                Ok(d) => (d, None),
                Err(_) if y_hat == 0.0 => (0.0, Some(Flag::ZeroReference)),
                Err(_) => (1.0, Some(Flag::ZeroReference)),
            },
            (None, None) => (0.0, Some(Flag::BothUndefined)),
            _ => (1.0, Some(Flag::SampleUndefined)),
        };
    }
    DistanceVector { distances, flags }
}

/// Computes both reports and their distances. The sample's spectrum is
/// truncated relative to the original's rank proxy.
pub fn evaluate(original: &Hypergraph, sample: &Hypergraph, opts: &StatOptions) -> Result<DistanceVector> {
    let reference = StatReport::compute(original, opts)?;
    evaluate_against(&reference, rank_proxy(original), sample, opts)
}

/// Like [`evaluate`] with the original's report already computed.
pub fn evaluate_against(
    reference: &StatReport,
    reference_rank: usize,
    sample: &Hypergraph,
    opts: &StatOptions,
) -> Result<DistanceVector> {
    if sample.num_edges() == 0 {
        return Err(Error::InvalidArgument("sample has no hyperedges".into()));
    }
    let report = StatReport::compute_with_reference(sample, opts, Some(reference_rank))?;
    Ok(compare_reports(reference, &report))
}

/// Ranks with ties sharing their average rank (1-based).
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Standardization with the population standard deviation; all zeros when
/// the values have no spread.
pub fn z_scores(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd == 0.0 || !sd.is_finite() {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - mean) / sd).collect()
}

/// Identifies one evaluated sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub method: String,
    pub dataset: String,
    pub portion: f64,
    pub trial: usize,
}

impl CellKey {
    fn setting(&self) -> (String, u64, usize) {
        (self.dataset.clone(), self.portion.to_bits(), self.trial)
    }
}

/// Distances for every (method, dataset, portion, trial) cell.
#[derive(Clone, Debug, Default)]
pub struct EvalMatrix {
    cells: Vec<(CellKey, DistanceVector)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScoredRow {
    pub key: CellKey,
    pub stat: Statistic,
    pub distance: f64,
    pub rank: f64,
    pub zscore: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodScore {
    pub method: String,
    pub distance: f64,
    pub rank: f64,
    pub zscore: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatSummary {
    pub stat: Statistic,
    pub methods: Vec<MethodScore>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AverageScore {
    pub method: String,
    pub rank: f64,
    pub zscore: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Aggregate {
    pub statistics: Vec<StatSummary>,
    pub average: Vec<AverageScore>,
    pub settings: usize,
}

impl Aggregate {
    pub fn score(&self, stat: Statistic, method: &str) -> Option<&MethodScore> {
        self.statistics
            .iter()
            .find(|s| s.stat == stat)?
            .methods
            .iter()
            .find(|m| m.method == method)
    }

    pub fn average_of(&self, method: &str) -> Option<&AverageScore> {
        self.average.iter().find(|a| a.method == method)
    }
}

impl EvalMatrix {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: CellKey, distances: DistanceVector) {
        self.cells.push((key, distances));
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[(CellKey, DistanceVector)] {
        &self.cells
    }

    /// Methods in first-seen order.
    pub fn methods(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for (k, _) in &self.cells {
            if !out.contains(&k.method) {
                out.push(k.method.clone());
            }
        }
        out
    }

    /// Per cell and statistic: distance with its rank and Z-score among the
    /// methods of the same (dataset, portion, trial) setting.
    pub fn scored_rows(&self) -> Vec<ScoredRow> {
        let mut settings: BTreeMap<(String, u64, usize), Vec<usize>> = BTreeMap::new();
        for (i, (k, _)) in self.cells.iter().enumerate() {
            settings.entry(k.setting()).or_default().push(i);
        }
        let mut scored: Vec<Option<[(f64, f64); 10]>> = vec![None; self.cells.len()];
        for members in settings.values() {
            if members.len() < 2 {
                log::warn!(
                    "setting {:?} has a single method; its rank is trivially 1",
                    self.cells[members[0]].0.setting()
                );
            }
            let mut per_cell = vec![[(0.0, 0.0); 10]; members.len()];
            for st in Statistic::ALL {
                let values: Vec<f64> = members.iter().map(|&i| self.cells[i].1.get(st)).collect();
                let ranks = average_ranks(&values);
                let z = z_scores(&values);
                for (slot, (r, z)) in per_cell.iter_mut().zip(ranks.into_iter().zip(z)) {
                    slot[st.index()] = (r, z);
                }
            }
            for (&i, s) in members.iter().zip(per_cell) {
                scored[i] = Some(s);
            }
        }
        let mut rows = Vec::with_capacity(self.cells.len() * 10);
        for ((key, dv), s) in self.cells.iter().zip(scored) {
            let s = s.expect("every cell belongs to a setting");
            for st in Statistic::ALL {
                rows.push(ScoredRow {
                    key: key.clone(),
                    stat: st,
                    distance: dv.get(st),
                    rank: s[st.index()].0,
                    zscore: s[st.index()].1,
                });
            }
        }
        rows
    }

    /// Mean distance, rank and Z-score per method and statistic over all
    /// cells, plus per-method averages over the ten statistics.
    pub fn aggregate(&self) -> Aggregate {
        let methods = self.methods();
        let rows = self.scored_rows();
        let mut sums: BTreeMap<(usize, usize), (f64, f64, f64, usize)> = BTreeMap::new();
        for r in &rows {
            let m = methods.iter().position(|m| *m == r.key.method).expect("known method");
            let e = sums.entry((r.stat.index(), m)).or_insert((0.0, 0.0, 0.0, 0));
            e.0 += r.distance;
            e.1 += r.rank;
            e.2 += r.zscore;
            e.3 += 1;
        }
        let statistics: Vec<StatSummary> = Statistic::ALL
            .into_iter()
            .map(|st| StatSummary {
                stat: st,
                methods: methods
                    .iter()
                    .enumerate()
                    .map(|(m, name)| {
                        let (d, r, z, n) = sums[&(st.index(), m)];
                        let n = n as f64;
                        MethodScore {
                            method: name.clone(),
                            distance: d / n,
                            rank: r / n,
                            zscore: z / n,
                        }
                    })
                    .collect(),
            })
            .collect();
        let average = methods
            .iter()
            .enumerate()
            .map(|(m, name)| AverageScore {
                method: name.clone(),
                rank: statistics.iter().map(|s| s.methods[m].rank).sum::<f64>() / 10.0,
                zscore: statistics.iter().map(|s| s.methods[m].zscore).sum::<f64>() / 10.0,
            })
            .collect();
        let settings = self
            .cells
            .iter()
            .map(|(k, _)| k.setting())
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        Aggregate {
            statistics,
            average,
            settings,
        }
    }

    /// Long-form CSV: `method,dataset,portion,trial,stat,distance,rank,zscore`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "method,dataset,portion,trial,stat,distance,rank,zscore")?;
        for r in self.scored_rows() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.key.method, r.key.dataset, r.key.portion, r.key.trial, r.stat, r.distance, r.rank, r.zscore
            )?;
        }
        Ok(())
    }
}
