use std::collections::HashSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hypersample::bench::{self, BenchmarkPlan, SPEC_VERSION};
use hypersample::eval::evaluate;
use hypersample::hypergraph::io::{self as hio, Format};
use hypersample::midas::{fit_regressor, RegressorModel, WeightMode};
use hypersample::samplers::{sample, FfConfig, Method, MgsConfig, MgsMove, MgsObjective, RwConfig, SampleSpec};
use hypersample::stats::{StatOptions, StatReport};
use hypersample::synthetic::SyntheticConfig;
use hypersample::theory::{BiasModel, PROFILE_CSV_HEADER};
use hypersample::{Error, Hypergraph};

#[derive(Parser)]
#[command(name = "hypersample", version, about = "Sub-hypergraph sampling and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structural statistics of a hypergraph as JSON.
    Stats {
        input: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        stat: StatArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a sub-hypergraph; writes the sample and a JSON sidecar.
    Sample(SampleArgs),
    /// Distances between a hypergraph and one of its samples.
    Evaluate {
        original: PathBuf,
        sample: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        stat: StatArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark plan.
    Benchmark {
        plan: PathBuf,
        /// Overrides the plan's output directory.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Overrides the plan's worker count.
        #[arg(long)]
        parallelism: Option<usize>,
    },
    /// Least-squares fit of the exponent regressor.
    FitRegressor {
        /// CSV with dataset, portion, skewness and alpha columns.
        observations: PathBuf,
        /// Dataset excluded from the fit.
        #[arg(long)]
        leave_out: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Low-degree mass and bias condition per degree threshold as CSV.
    Theory {
        input: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        /// Comma-separated modes (min, max, avg) or `all`.
        #[arg(long, default_value = "all")]
        weight_mode: String,
        /// Comma-separated exponents.
        #[arg(long, default_value = "1")]
        alpha_grid: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic heavy-tailed hypergraph.
    GenSynthetic {
        #[arg(long, default_value = "desk")]
        preset: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        edges: Option<usize>,
        /// Probability of filling a slot preferentially.
        #[arg(long)]
        preference: Option<f64>,
        #[arg(short, long)]
        output: PathBuf,
    },
}

#[derive(Args, Clone)]
struct LoadArgs {
    /// Input format: plain (one hyperedge per line) or benson.
    #[arg(long, default_value = "plain")]
    format: String,
}

impl LoadArgs {
    fn load(&self, path: &Path) -> Result<Hypergraph, Error> {
        let format: Format = self.format.parse()?;
        Ok(hio::load(path, format)?.graph)
    }
}

#[derive(Args, Clone)]
struct StatArgs {
    /// Seed of the randomized estimators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    exact_threshold: Option<usize>,
    #[arg(long)]
    gcc_samples: Option<usize>,
    #[arg(long)]
    diameter_sources: Option<usize>,
    #[arg(long)]
    sv_rank_cap: Option<usize>,
    #[arg(long)]
    pair_size_cap: Option<usize>,
}

impl StatArgs {
    fn options(&self) -> StatOptions {
        let d = StatOptions::default();
        StatOptions {
            seed: self.seed,
            exact_threshold: self.exact_threshold.unwrap_or(d.exact_threshold),
            gcc_samples: self.gcc_samples.unwrap_or(d.gcc_samples),
            diameter_sources: self.diameter_sources.unwrap_or(d.diameter_sources),
            sv_rank_cap: self.sv_rank_cap.unwrap_or(d.sv_rank_cap),
            pair_size_cap: self.pair_size_cap.unwrap_or(d.pair_size_cap),
            ..d
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    input: PathBuf,
    #[command(flatten)]
    load: LoadArgs,
    #[arg(long)]
    method: String,
    #[arg(long)]
    portion: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sample path; the sidecar goes next to it with a `.json` extension.
    #[arg(short, long)]
    output: PathBuf,
    /// Fixed exponent for midas-basic, midas-max, midas-avg and midas-ns.
    #[arg(long)]
    alpha: Option<f64>,
    /// Regressor for midas: `published` or a JSON file.
    #[arg(long)]
    regressor: Option<String>,
    #[arg(long, value_parser = ["deg", "avg"])]
    mgs_objective: Option<String>,
    #[arg(long, value_parser = ["add", "replace", "rep", "delete", "del"])]
    mgs_move: Option<String>,
    #[arg(long)]
    mgs_k: Option<f64>,
    #[arg(long)]
    rw_restart: Option<f64>,
    /// Step to a uniform distinct neighbour instead of via a hyperedge.
    #[arg(long)]
    rw_distinct: bool,
    #[arg(long)]
    ff_p: Option<f64>,
    #[arg(long)]
    ff_q: Option<f64>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

impl SampleArgs {
    fn method(&self) -> Result<Method, Error> {
        let mgs_flags = self.mgs_objective.is_some() || self.mgs_move.is_some() || self.mgs_k.is_some();
        let mut method: Method = if self.method == "mgs" {
            let (Some(o), Some(m)) = (&self.mgs_objective, &self.mgs_move) else {
                return Err(usage("method mgs needs --mgs-objective and --mgs-move"));
            };
            let objective = if o == "deg" { MgsObjective::Deg } else { MgsObjective::Avg };
            let moves = match m.as_str() {
                "add" => MgsMove::Add,
                "replace" | "rep" => MgsMove::Replace,
                _ => MgsMove::Delete,
            };
            Method::Mgs(MgsConfig::new(objective, moves))
        } else {
            if self.mgs_objective.is_some() || self.mgs_move.is_some() {
                return Err(usage("--mgs-objective/--mgs-move only apply to --method mgs"));
            }
            self.method.parse()?
        };
        match &mut method {
            Method::Mgs(c) => {
                if let Some(k) = self.mgs_k {
                    c.temperature = k;
                }
                c.validate()?;
            }
            _ if mgs_flags => return Err(usage("--mgs-* flags only apply to MGS methods")),
            Method::MidasBasic { alpha, .. } | Method::MidasNs { alpha } => {
                if self.alpha.is_some() {
                    if alpha.is_some() {
                        return Err(usage("exponent given both in the method name and --alpha"));
                    }
                    *alpha = self.alpha;
                }
            }
            Method::Midas(p) => {
                if let Some(r) = &self.regressor {
                    p.model = RegressorModel::resolve(r)?;
                }
            }
            Method::Rw(c) => {
                *c = RwConfig {
                    restart: self.rw_restart.unwrap_or(c.restart),
                    distinct_neighbors: self.rw_distinct,
                }
            }
            Method::Ff(c) => {
                *c = FfConfig {
                    p: self.ff_p.unwrap_or(c.p),
                    q: self.ff_q.unwrap_or(c.q),
                }
            }
            _ => {}
        }
        let uses = |flag: bool, name: &str, ok: bool| -> Result<(), Error> {
            if flag && !ok {
                Err(usage(format!("{name} does not apply to method {}", method.name())))
            } else {
                Ok(())
            }
        };
        uses(
            self.alpha.is_some(),
            "--alpha",
            matches!(method, Method::MidasBasic { .. } | Method::MidasNs { .. }),
        )?;
        uses(self.regressor.is_some(), "--regressor", matches!(method, Method::Midas(_)))?;
        uses(
            self.rw_restart.is_some() || self.rw_distinct,
            "--rw-*",
            matches!(method, Method::Rw(_)),
        )?;
        uses(
            self.ff_p.is_some() || self.ff_q.is_some(),
            "--ff-*",
            matches!(method, Method::Ff(_)),
        )?;
        Ok(method)
    }
}

fn emit(output: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, bytes).map_err(|e| Error::Io {
            path: p.clone(),
            source: e,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|e| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source: e,
                })
        }
    }
}

fn json_bytes(v: &Value) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable");
    b.push(b'\n');
    b
}

fn with_version(v: Value) -> Value {
    let mut map = serde_json::Map::new();
    map.insert("spec_version".into(), json!(SPEC_VERSION));
    if let Value::Object(rest) = v {
        map.extend(rest);
    }
    Value::Object(map)
}

fn parse_modes(s: &str) -> Result<Vec<WeightMode>, Error> {
    if s == "all" {
        return Ok(WeightMode::ALL.to_vec());
    }
    s.split(',').map(|m| m.trim().parse()).collect()
}

fn parse_alphas(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|a| {
            let a = a.trim();
            a.parse::<f64>()
                .ok()
                .filter(|v| *v >= 0.0 && v.is_finite())
                .ok_or_else(|| usage(format!("bad exponent {a:?}")))
        })
        .collect()
}

fn check_subset(original: &Hypergraph, sample: &Hypergraph) -> Result<(), Error> {
    let known: HashSet<Vec<u64>> = hio::canonical_edges(original).into_iter().collect();
    match hio::canonical_edges(sample).into_iter().find(|e| !known.contains(e)) {
        Some(e) => Err(Error::NotSubset(e)),
        None => Ok(()),
    }
}

fn run(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Stats {
            input,
            load,
            stat,
            output,
        } => {
            let g = load.load(&input)?;
            let report = StatReport::compute(&g, &stat.options())?;
            let v = serde_json::to_value(&report).expect("serializable");
            emit(&output, &json_bytes(&with_version(v)))
        }
        Command::Sample(args) => {
            let method = args.method()?;
            let g = args.load.load(&args.input)?;
            let spec = SampleSpec {
                method: method.clone(),
                portion: args.portion,
                seed: args.seed,
            };
            let s = sample(&g, &spec)?;
            hio::save_plain(&s.sub.to_hypergraph(), &args.output)?;
            let sidecar = with_version(json!({
                "input": args.input.display().to_string(),
                "params": method,
                "selection": format!("{:?}", s.sub.selection()).to_lowercase(),
                "info": s.info,
            }));
            let side = args.output.with_extension("json");
            emit(&Some(side), &json_bytes(&sidecar))
        }
        Command::Evaluate {
            original,
            sample,
            load,
            stat,
            output,
        } => {
            let g = load.load(&original)?;
            let s = load.load(&sample)?;
            check_subset(&g, &s)?;
            let d = evaluate(&g, &s, &stat.options())?;
            emit(&output, &json_bytes(&with_version(d.to_json())))
        }
        Command::Benchmark {
            plan,
            output,
            parallelism,
        } => {
            let mut plan = BenchmarkPlan::load(&plan)?;
            if let Some(o) = output {
                plan.output = Some(o);
            }
            if let Some(p) = parallelism {
                plan.parallelism = p;
            }
            let dir = plan
                .output
                .clone()
                .ok_or_else(|| Error::Plan("no output directory (plan key `output` or --output)".into()))?;
            let outcome = bench::run(&plan)?;
            bench::write_outputs(&outcome, &dir)?;
            let summary = fs::read(dir.join("summary.json")).map_err(|e| Error::Io {
                path: dir.join("summary.json"),
                source: e,
            })?;
            emit(&None, &summary)
        }
        Command::FitRegressor {
            observations,
            leave_out,
            output,
        } => {
            let mut obs = bench::read_observations(&observations)?;
            if let Some(d) = &leave_out {
                let before = obs.len();
                obs.retain(|o| &o.dataset != d);
                if obs.len() == before {
                    log::warn!("dataset {d:?} not in {}; nothing left out", observations.display());
                }
            }
            let model = fit_regressor(&obs)?;
            let v = serde_json::to_value(model).expect("serializable");
            emit(&output, &json_bytes(&with_version(v)))
        }
        Command::Theory {
            input,
            load,
            weight_mode,
            alpha_grid,
            output,
        } => {
            let modes = parse_modes(&weight_mode)?;
            let alphas = parse_alphas(&alpha_grid)?;
            let g = load.load(&input)?;
            let mut buf = Vec::new();
            writeln!(buf, "{PROFILE_CSV_HEADER}").expect("in-memory write");
            for mode in modes {
                let model = BiasModel::new(&g, mode);
                for &a in &alphas {
                    model.profile(a).write_csv_rows(&mut buf).expect("in-memory write");
                }
            }
            emit(&output, &buf)
        }
        Command::GenSynthetic {
            preset,
            seed,
            nodes,
            edges,
            preference,
            output,
        } => {
            let mut cfg = match preset.as_str() {
                "desk" => SyntheticConfig::desk(seed),
                "small" => SyntheticConfig::small(seed),
                other => return Err(usage(format!("unknown preset {other:?}; expected desk or small"))),
            };
            cfg.nodes = nodes.unwrap_or(cfg.nodes);
            cfg.edges = edges.unwrap_or(cfg.edges);
            cfg.preference = preference.unwrap_or(cfg.preference);
            let g = cfg.generate()?;
            hio::save_plain(&g, &output)
        }
    }
}

/// 1 for bad invocations, 2 for problems with the data.
fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidArgument(_) | Error::Plan(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let doc = json!({
                "spec_version": SPEC_VERSION,
                "error": e.kind(),
                "message": e.to_string(),
            });
            eprintln!("{doc}");
            ExitCode::from(exit_code(&e))
        }
    }
}
