//! Benchmark plans: every (dataset, method, portion, trial) cell is sampled,
//! evaluated against its dataset, and the distances ranked per setting.
//!
//! A plan is a flat `key = value` file. Lists are comma separated and
//! `dataset` may repeat. Blank lines and `#` comments are ignored.
//!
//! ```text
//! dataset = data/email-enron.hyg
//! dataset = synthetic:desk:7
//! methods = rhs, midas, mgs-avg-rep@10
//! portions = 0.1, 0.3
//! trials = 3
//! seed = 42
//! parallelism = 4
//! output = out/
//! regressor = published
//! ```
//!
//! `regressor` (a built-in name or a JSON file) replaces the model used by
//! `midas` cells.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{evaluate_against, Aggregate, CellKey, DistanceVector, EvalMatrix};
use crate::hypergraph::io::{self, Format};
use crate::hypergraph::Hypergraph;
use crate::midas::{default_grid, midas_grid, Observation, RegressorModel, WeightMode};
use crate::samplers::{sample, Method, SampleInfo, SampleSpec};
use crate::seed::stable_hash;
use crate::stats::{rank_proxy, StatOptions, StatReport};
use crate::synthetic::SyntheticConfig;

/// Version tag carried by every JSON document this crate writes.
pub const SPEC_VERSION: &str = "1.0";

/// Where a dataset comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSource {
    File { path: PathBuf, format: Format },
    /// Built-in generator preset (`desk` or `small`) with a seed.
    Synthetic { preset: String, seed: u64 },
}

impl DatasetSource {
    /// `synthetic:<preset>:<seed>`, `benson:<prefix>`, or a plain file path.
    /// Relative paths are resolved against `base`.
    pub fn parse(value: &str, base: &Path) -> Result<Self> {
        if let Some(rest) = value.strip_prefix("synthetic:") {
            let (preset, seed) = rest.split_once(':').unwrap_or((rest, "0"));
            let seed = seed
                .parse()
                .map_err(|_| Error::Plan(format!("bad synthetic seed in {value:?}")))?;
            if !matches!(preset, "desk" | "small") {
                return Err(Error::Plan(format!("unknown synthetic preset {preset:?}")));
            }
            return Ok(DatasetSource::Synthetic {
                preset: preset.to_string(),
                seed,
            });
        }
        let (format, raw) = match value.strip_prefix("benson:") {
            Some(p) => (Format::Benson, p),
            None => (Format::Plain, value),
        };
        let path = Path::new(raw);
        let path = if path.is_relative() { base.join(path) } else { path.to_path_buf() };
        Ok(DatasetSource::File { path, format })
    }

    pub fn name(&self) -> String {
        match self {
            DatasetSource::Synthetic { preset, seed } => format!("synthetic-{preset}-{seed}"),
            DatasetSource::File { path, format } => {
                let stem = path
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string());
                match format {
                    Format::Benson => stem
                        .trim_end_matches("-nverts.txt")
                        .trim_end_matches("-simplices.txt")
                        .to_string(),
                    Format::Plain => match stem.rsplit_once('.') {
                        Some((s, _)) if !s.is_empty() => s.to_string(),
                        _ => stem,
                    },
                }
            }
        }
    }

    pub fn load(&self) -> Result<Hypergraph> {
        match self {
            DatasetSource::File { path, format } => Ok(io::load(path, *format)?.graph),
            DatasetSource::Synthetic { preset, seed } => {
                let cfg = match preset.as_str() {
                    "desk" => SyntheticConfig::desk(*seed),
                    _ => SyntheticConfig::small(*seed),
                };
                cfg.generate()
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkPlan {
    pub datasets: Vec<DatasetSource>,
    pub methods: Vec<Method>,
    pub portions: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub parallelism: usize,
    pub output: Option<PathBuf>,
    pub stats: StatOptions,
    /// Also run the exhaustive exponent search per (dataset, portion),
    /// producing regression observations.
    pub alpha_search: bool,
}

impl Default for BenchmarkPlan {
    fn default() -> Self {
        BenchmarkPlan {
            datasets: Vec::new(),
            methods: Vec::new(),
            portions: vec![0.1, 0.2, 0.3, 0.4, 0.5],
            trials: 3,
            seed: 0,
            parallelism: 1,
            output: None,
            stats: StatOptions::default(),
            alpha_search: false,
        }
    }
}

fn parse_list<T>(key: &str, value: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| f(s).map_err(|e| Error::Plan(format!("{key}: {e}"))))
        .collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Plan(format!("{key}: cannot parse {value:?}")))
}

impl BenchmarkPlan {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses plan text; relative paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut plan = BenchmarkPlan::default();
        let mut regressor = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Plan(format!("line {}: expected key = value", n + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "dataset" | "datasets" => {
                    let more = parse_list(key, value, |s| DatasetSource::parse(s, base))?;
                    plan.datasets.extend(more);
                }
                "methods" => plan.methods = parse_list(key, value, |s| s.parse::<Method>())?,
                "portions" => plan.portions = parse_list(key, value, |s| parse_num(key, s))?,
                "trials" => plan.trials = parse_num(key, value)?,
                "seed" => plan.seed = parse_num(key, value)?,
                "parallelism" => plan.parallelism = parse_num(key, value)?,
                "output" => {
                    let p = Path::new(value);
                    plan.output = Some(if p.is_relative() { base.join(p) } else { p.to_path_buf() });
                }
                "regressor" => {
                    let p = Path::new(value);
                    let spec = if RegressorModel::builtin(value).is_none() && p.is_relative() {
                        base.join(p).display().to_string()
                    } else {
                        value.to_string()
                    };
                    regressor = Some(RegressorModel::resolve(&spec).map_err(|e| Error::Plan(format!("regressor: {e}")))?);
                }
                "alpha_search" => plan.alpha_search = parse_num(key, value)?,
                "exact_threshold" => plan.stats.exact_threshold = parse_num(key, value)?,
                "gcc_samples" => plan.stats.gcc_samples = parse_num(key, value)?,
                "diameter_sources" => plan.stats.diameter_sources = parse_num(key, value)?,
                "sv_rank_cap" => plan.stats.sv_rank_cap = parse_num(key, value)?,
                "pair_size_cap" => plan.stats.pair_size_cap = parse_num(key, value)?,
                "stat_seed" => plan.stats.seed = parse_num(key, value)?,
                other => return Err(Error::Plan(format!("line {}: unknown key {other:?}", n + 1))),
            }
        }
        if let Some(model) = regressor {
            for m in &mut plan.methods {
                if let Method::Midas(p) = m {
                    p.model = model;
                }
            }
        }
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() {
            return Err(Error::Plan("no datasets".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Plan("no methods".into()));
        }
        if self.methods.len() < 2 {
            log::warn!("a single method gets rank 1 and Z-score 0 everywhere");
        }
        if let Some(p) = self.portions.iter().find(|&&p| !(p > 0.0 && p < 1.0)) {
            return Err(Error::Plan(format!("portion {p} not in (0, 1)")));
        }
        if self.portions.is_empty() {
            return Err(Error::Plan("no portions".into()));
        }
        if self.trials == 0 {
            return Err(Error::Plan("trials must be ≥ 1".into()));
        }
        let mut names: Vec<String> = self.methods.iter().map(Method::name).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Plan(format!("method {} listed twice", w[0])));
        }
        let mut sets: Vec<String> = self.datasets.iter().map(DatasetSource::name).collect();
        sets.sort();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Plan(format!("dataset name {} used twice", w[0])));
        }
        Ok(())
    }
}

/// Seed of one cell, independent of scheduling order.
pub fn cell_seed(base: u64, dataset: &str, method: &str, portion: f64, trial: usize) -> u64 {
    stable_hash([
        &base.to_le_bytes()[..],
        dataset.as_bytes(),
        method.as_bytes(),
        &portion.to_bits().to_le_bytes(),
        &(trial as u64).to_le_bytes(),
    ])
}

#[derive(Clone, Debug)]
pub struct CellRecord {
    pub key: CellKey,
    pub info: SampleInfo,
    pub distances: DistanceVector,
}

#[derive(Clone, Debug)]
pub struct CellFailure {
    pub key: CellKey,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AlphaSearchRow {
    pub dataset: String,
    pub portion: f64,
    pub skewness: f64,
    pub alpha: f64,
    pub loss: f64,
}

impl From<&AlphaSearchRow> for Observation {
    fn from(r: &AlphaSearchRow) -> Self {
        Observation {
            dataset: r.dataset.clone(),
            skewness: r.skewness,
            portion: r.portion,
            alpha: r.alpha,
        }
    }
}

#[derive(Debug)]
pub struct BenchmarkOutcome {
    pub cells: Vec<CellRecord>,
    pub failures: Vec<CellFailure>,
    pub alpha_search: Vec<AlphaSearchRow>,
}

impl BenchmarkOutcome {
    pub fn matrix(&self) -> EvalMatrix {
        let mut m = EvalMatrix::new();
        for c in &self.cells {
            m.insert(c.key.clone(), c.distances.clone());
        }
        m
    }

    pub fn aggregate(&self) -> Aggregate {
        self.matrix().aggregate()
    }
}

struct Dataset {
    name: String,
    graph: Hypergraph,
    report: StatReport,
    rank: usize,
}

fn run_cell(d: &Dataset, method: &Method, portion: f64, trial: usize, plan: &BenchmarkPlan) -> Result<CellRecord> {
    let name = method.name();
    let spec = SampleSpec {
        method: method.clone(),
        portion,
        seed: cell_seed(plan.seed, &d.name, &name, portion, trial),
    };
    let s = sample(&d.graph, &spec)?;
    let distances = evaluate_against(&d.report, d.rank, &s.sub.to_hypergraph(), &plan.stats)?;
    Ok(CellRecord {
        key: CellKey {
            method: name,
            dataset: d.name.clone(),
            portion,
            trial,
        },
        info: s.info,
        distances,
    })
}

/// Runs every cell of `plan`. Only plan and dataset-loading problems are
/// errors; failing cells are reported in the outcome.
pub fn run(plan: &BenchmarkPlan) -> Result<BenchmarkOutcome> {
    plan.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism.max(1))
        .build()
        .map_err(|e| Error::Plan(format!("thread pool: {e}")))?;
    pool.install(|| run_in_pool(plan))
}

fn run_in_pool(plan: &BenchmarkPlan) -> Result<BenchmarkOutcome> {
    let datasets: Vec<Dataset> = plan
        .datasets
        .par_iter()
        .map(|src| {
            let graph = src.load()?;
            let report = StatReport::compute(&graph, &plan.stats)?;
            let rank = rank_proxy(&graph);
            Ok(Dataset {
                name: src.name(),
                graph,
                report,
                rank,
            })
        })
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (di, _) in datasets.iter().enumerate() {
        for &portion in &plan.portions {
            for trial in 0..plan.trials {
                for (mi, _) in plan.methods.iter().enumerate() {
                    jobs.push((di, mi, portion, trial));
                }
            }
        }
    }
    let results: Vec<std::result::Result<CellRecord, CellFailure>> = jobs
        .par_iter()
        .map(|&(di, mi, portion, trial)| {
            let d = &datasets[di];
            let method = &plan.methods[mi];
            run_cell(d, method, portion, trial, plan).map_err(|e| CellFailure {
                key: CellKey {
                    method: method.name(),
                    dataset: d.name.clone(),
                    portion,
                    trial,
                },
                error: e.to_string(),
            })
        })
        .collect();
    let mut cells = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(c) => cells.push(c),
            Err(f) => {
                log::warn!(
                    "cell {} / {} / {} / {} failed and is excluded: {}",
                    f.key.dataset,
                    f.key.method,
                    f.key.portion,
                    f.key.trial,
                    f.error
                );
                failures.push(f);
            }
        }
    }

    let alpha_search = if plan.alpha_search {
        let grid = default_grid();
        let mut settings = Vec::new();
        for d in &datasets {
            for &p in &plan.portions {
                settings.push((d, p));
            }
        }
        settings
            .par_iter()
            .map(|&(d, p)| {
                let seed = stable_hash([
                    &plan.seed.to_le_bytes()[..],
                    d.name.as_bytes(),
                    b"alpha-search",
                    &p.to_bits().to_le_bytes(),
                ]);
                let out = midas_grid(&d.graph, p, WeightMode::Min, &grid, seed)?;
                Ok(AlphaSearchRow {
                    dataset: d.name.clone(),
                    portion: p,
                    skewness: out.skewness,
                    alpha: out.alpha,
                    loss: out.loss,
                })
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    Ok(BenchmarkOutcome {
        cells,
        failures,
        alpha_search,
    })
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub const ALPHA_SEARCH_HEADER: &str = "dataset,portion,skewness,alpha,loss";

pub fn alpha_search_csv(rows: &[AlphaSearchRow]) -> String {
    let mut s = String::from(ALPHA_SEARCH_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.dataset, r.portion, r.skewness, r.alpha, r.loss);
    }
    s
}

/// Reads regression observations from a CSV with at least the columns
/// `dataset`, `portion`, `skewness` and `alpha` (any order).
pub fn read_observations(path: &Path) -> Result<Vec<Observation>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::EmptyInput(path.to_path_buf()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let col = |name: &str| {
        cols.iter().position(|c| *c == name).ok_or_else(|| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("missing column {name:?}"),
        })
    };
    let (cd, cp, cs, ca) = (col("dataset")?, col("portion")?, col("skewness")?, col("alpha")?);
    let mut out = Vec::new();
    for (n, line) in lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: n + 1,
            message,
        };
        let get = |i: usize| fields.get(i).copied().ok_or_else(|| bad(format!("missing field {}", i + 1)));
        let num = |i: usize| -> Result<f64> {
            let f = get(i)?;
            f.parse().map_err(|_| bad(format!("not a number: {f:?}")))
        };
        out.push(Observation {
            dataset: get(cd)?.to_string(),
            portion: num(cp)?,
            skewness: num(cs)?,
            alpha: num(ca)?,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    spec_version: &'a str,
    cells: usize,
    failed_cells: usize,
    #[serde(flatten)]
    aggregate: &'a Aggregate,
}

/// Writes `results.csv`, `cells.csv`, `summary.json`, `timings.csv`, and
/// `failures.csv` / `alpha_search.csv` when non-empty. Every file except
/// `timings.csv` is a deterministic function of the plan.
pub fn write_outputs(outcome: &BenchmarkOutcome, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, bytes: &[u8]| -> Result<()> {
        let p = dir.join(name);
        fs::write(&p, bytes).map_err(|e| Error::io(&p, e))
    };

    let matrix = outcome.matrix();
    let mut results = Vec::new();
    matrix.write_csv(&mut results).expect("in-memory write");
    write("results.csv", &results)?;

    let mut cells = String::from(
        "method,dataset,portion,trial,seed,target,trimmed,skewness,alpha_initial,alpha,loss,loss_evaluations,acceptance_rate,forced_accepts\n",
    );
    let mut timings = String::from("method,dataset,portion,trial,wall_time\n");
    for c in &outcome.cells {
        let (k, i) = (&c.key, &c.info);
        let _ = writeln!(
            cells,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            k.method,
            k.dataset,
            k.portion,
            k.trial,
            i.seed,
            i.target,
            i.trimmed,
            opt(i.skewness),
            opt(i.alpha_initial),
            opt(i.alpha),
            opt(i.loss),
            opt(i.loss_evaluations),
            opt(i.acceptance_rate),
            opt(i.forced_accepts)
        );
        let _ = writeln!(
            timings,
            "{},{},{},{},{}",
            k.method,
            k.dataset,
            k.portion,
            k.trial,
            opt(i.wall_time)
        );
    }
    write("cells.csv", cells.as_bytes())?;
    write("timings.csv", timings.as_bytes())?;

    let aggregate = matrix.aggregate();
    let doc = SummaryDoc {
        spec_version: SPEC_VERSION,
        cells: outcome.cells.len(),
        failed_cells: outcome.failures.len(),
        aggregate: &aggregate,
    };
    let mut json = serde_json::to_vec_pretty(&doc).expect("serializable summary");
    json.push(b'\n');
    write("summary.json", &json)?;

    if !outcome.failures.is_empty() {
        let mut f = String::from("method,dataset,portion,trial,error\n");
        for x in &outcome.failures {
            let msg = x.error.replace(['\n', ','], " ");
            let _ = writeln!(f, "{},{},{},{},{}", x.key.method, x.key.dataset, x.key.portion, x.key.trial, msg);
        }
        write("failures.csv", f.as_bytes())?;
    }
    if !outcome.alpha_search.is_empty() {
        write("alpha_search.csv", alpha_search_csv(&outcome.alpha_search).as_bytes())?;
    }
    Ok(())
}

/// Mean rank per method for one statistic, keyed by method name.
pub fn mean_ranks(aggregate: &Aggregate, stat: crate::eval::Statistic) -> BTreeMap<String, f64> {
    aggregate
        .statistics
        .iter()
        .filter(|s| s.stat == stat)
        .flat_map(|s| s.methods.iter().map(|m| (m.method.clone(), m.rank)))
        .collect()
}

/// Writes a plan back in the text format.
pub fn write_plan<W: Write>(plan: &BenchmarkPlan, mut out: W) -> std::io::Result<()> {
    for d in &plan.datasets {
        match d {
            DatasetSource::Synthetic { preset, seed } => writeln!(out, "dataset = synthetic:{preset}:{seed}")?,
            DatasetSource::File { path, format: Format::Benson } => {
                writeln!(out, "dataset = benson:{}", path.display())?
            }
            DatasetSource::File { path, .. } => writeln!(out, "dataset = {}", path.display())?,
        }
    }
    let methods: Vec<String> = plan.methods.iter().map(Method::name).collect();
    let portions: Vec<String> = plan.portions.iter().map(f64::to_string).collect();
    writeln!(out, "methods = {}", methods.join(", "))?;
    writeln!(out, "portions = {}", portions.join(", "))?;
    writeln!(out, "trials = {}", plan.trials)?;
    writeln!(out, "seed = {}", plan.seed)?;
    writeln!(out, "parallelism = {}", plan.parallelism)?;
    if let Some(o) = &plan.output {
        writeln!(out, "output = {}", o.display())?;
    }
    if plan.alpha_search {
        writeln!(out, "alpha_search = true")?;
    }
    Ok(())
}
