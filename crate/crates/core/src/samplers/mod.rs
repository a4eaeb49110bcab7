//! Sub-hypergraph samplers.
//!
//! Node selection (`rns`, `rdn`, `rw`, `ff`, `midas-ns`) grows a node set and
//! keeps the induced hyperedges; hyperedge selection (`rhs`, `tihs`, `mgs-*`,
//! `midas*`) picks hyperedges and keeps the union of their members. Every
//! sampler returns exactly ⌊|E|·p⌋ hyperedges.

mod edge;
mod mgs;
mod node;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use edge::{rhs, tihs};
pub use mgs::{acceptance_probability, mgs, MgsConfig, MgsMove, MgsObjective, MgsOutcome};
pub use node::{ff, midas_ns, rdn, rns, rw, FfConfig, RwConfig};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, SubHypergraph};
use crate::midas::{self, coarse_grid, MidasParams, WeightMode};
use crate::seed;

/// ⌊|E|·p⌋, which must be at least 1. A relative slack of 1e-9 absorbs
/// representation error such as 0.29 · 100 = 28.999….
pub fn target_size(h: &Hypergraph, portion: f64) -> Result<usize> {
    if !(portion > 0.0 && portion < 1.0) {
        return Err(Error::InvalidArgument(format!("portion must be in (0, 1), got {portion}")));
    }
    let raw = h.num_edges() as f64 * portion;
    let target = (raw * (1.0 + 1e-9)).floor() as usize;
    let target = target.min(h.num_edges());
    if target == 0 {
        return Err(Error::InvalidArgument(format!(
            "portion {portion} of {} hyperedges selects nothing",
            h.num_edges()
        )));
    }
    Ok(target)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    Rns,
    Rdn,
    Rw(RwConfig),
    Ff(FfConfig),
    Rhs,
    Tihs,
    Mgs(MgsConfig),
    /// Automatic exponent selection.
    Midas(MidasParams),
    /// Fixed exponent, or grid-tuned on the coarse grid when `alpha` is
    /// `None`.
    MidasBasic { mode: WeightMode, alpha: Option<f64> },
    /// Node selection with degree^α weights.
    MidasNs { alpha: Option<f64> },
}

impl Method {
    /// Canonical names of every family, as accepted by [`FromStr`].
    pub const NAMES: [&'static str; 17] = [
        "rns",
        "rdn",
        "rw",
        "ff",
        "rhs",
        "tihs",
        "mgs-deg-add",
        "mgs-deg-rep",
        "mgs-deg-del",
        "mgs-avg-add",
        "mgs-avg-rep",
        "mgs-avg-del",
        "midas",
        "midas-basic",
        "midas-max",
        "midas-avg",
        "midas-ns",
    ];

    pub fn name(&self) -> String {
        let with_alpha = |base: &str, alpha: &Option<f64>| match alpha {
            Some(a) => format!("{base}@{a}"),
            None => base.to_string(),
        };
        match self {
            Method::Rns => "rns".into(),
            Method::Rdn => "rdn".into(),
            Method::Rw(_) => "rw".into(),
            Method::Ff(_) => "ff".into(),
            Method::Rhs => "rhs".into(),
            Method::Tihs => "tihs".into(),
            Method::Mgs(c) => c.name(),
            Method::Midas(_) => "midas".into(),
            Method::MidasBasic { mode, alpha } => {
                let base = match mode {
                    WeightMode::Min => "midas-basic",
                    WeightMode::Max => "midas-max",
                    WeightMode::Avg => "midas-avg",
                };
                with_alpha(base, alpha)
            }
            Method::MidasNs { alpha } => with_alpha("midas-ns", alpha),
        }
    }

    pub fn is_node_selection(&self) -> bool {
        matches!(self, Method::Rns | Method::Rdn | Method::Rw(_) | Method::Ff(_) | Method::MidasNs { .. })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Parses `name` or `name@param`. The parameter is α for the `midas-*`
/// variants and the temperature k for `mgs-*`.
impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, param) = match s.split_once('@') {
            Some((b, p)) => {
                let v: f64 = p
                    .parse()
                    .map_err(|_| Error::InvalidArgument(format!("bad parameter in method {s:?}")))?;
                (b, Some(v))
            }
            None => (s, None),
        };
        let no_param = |m: Method| match param {
            None => Ok(m),
            Some(_) => Err(Error::InvalidArgument(format!("method {base:?} takes no @parameter"))),
        };
        let basic = |mode| Method::MidasBasic { mode, alpha: param };
        match base {
            "rns" => no_param(Method::Rns),
            "rdn" => no_param(Method::Rdn),
            "rw" => no_param(Method::Rw(RwConfig::default())),
            "ff" => no_param(Method::Ff(FfConfig::default())),
            "rhs" => no_param(Method::Rhs),
            "tihs" => no_param(Method::Tihs),
            "midas" => no_param(Method::Midas(MidasParams::default())),
            "midas-basic" => Ok(basic(WeightMode::Min)),
            "midas-max" => Ok(basic(WeightMode::Max)),
            "midas-avg" => Ok(basic(WeightMode::Avg)),
            "midas-ns" => Ok(Method::MidasNs { alpha: param }),
            _ if base.starts_with("mgs-") => {
                let mut cfg: MgsConfig = base.parse()?;
                if let Some(k) = param {
                    cfg.temperature = k;
                }
                cfg.validate()?;
                Ok(Method::Mgs(cfg))
            }
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?}; expected one of {}",
                Method::NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub method: Method,
    pub portion: f64,
    pub seed: u64,
}

/// Everything about a run except the hyperedges themselves.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SampleInfo {
    pub method: String,
    pub portion: f64,
    pub seed: u64,
    pub target: usize,
    /// Hyperedges removed to hit the exact target.
    pub trimmed: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skewness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_initial: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub loss_evaluations: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub acceptance_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_accepts: Option<usize>,
    /// Wall time in seconds. Excluded from byte-compared outputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct Sample<'g> {
    pub sub: SubHypergraph<'g>,
    pub info: SampleInfo,
}

pub fn sample<'g>(h: &'g Hypergraph, spec: &SampleSpec) -> Result<Sample<'g>> {
    let started = Instant::now();
    let target = target_size(h, spec.portion)?;
    let mut info = SampleInfo {
        method: spec.method.name(),
        portion: spec.portion,
        seed: spec.seed,
        target,
        ..SampleInfo::default()
    };
    let mut rng = seed::rng(spec.seed);
    let sub = match &spec.method {
        Method::Rns => rns(h, target, &mut rng)?,
        Method::Rdn => rdn(h, target, &mut rng)?,
        Method::Rw(c) => rw(h, target, c, &mut rng)?,
        Method::Ff(c) => ff(h, target, c, &mut rng)?,
        Method::Rhs => rhs(h, target, &mut rng)?,
        Method::Tihs => tihs(h, target, &mut rng)?,
        Method::Mgs(c) => {
            let out = mgs(h, target, c, &mut rng)?;
            info.acceptance_rate = Some(out.acceptance_rate);
            info.forced_accepts = Some(out.forced_accepts);
            out.sub
        }
        Method::Midas(params) => {
            let out = midas::midas(h, spec.portion, params, spec.seed)?;
            info.skewness = Some(out.skewness);
            info.alpha_initial = out.alpha_initial;
            info.alpha = Some(out.alpha);
            info.loss = Some(out.loss);
            info.loss_evaluations = Some(out.evaluations);
            SubHypergraph::from_hyperedges(h, &out.edges)?
        }
        Method::MidasBasic { mode, alpha: Some(a) } => {
            info.alpha = Some(*a);
            midas::midas_basic(h, spec.portion, *a, *mode, spec.seed)?
        }
        Method::MidasBasic { mode, alpha: None } => {
            let out = midas::midas_grid(h, spec.portion, *mode, &coarse_grid(), spec.seed)?;
            info.alpha = Some(out.alpha);
            info.loss = Some(out.loss);
            info.loss_evaluations = Some(out.evaluations);
            SubHypergraph::from_hyperedges(h, &out.edges)?
        }
        Method::MidasNs { alpha: Some(a) } => {
            info.alpha = Some(*a);
            midas_ns(h, target, *a, &mut rng)?
        }
        Method::MidasNs { alpha: None } => {
            let (alpha, sub) = node::midas_ns_tuned(h, target, &coarse_grid(), spec.seed)?;
            info.alpha = Some(alpha);
            sub
        }
    };
    debug_assert_eq!(sub.num_edges(), target);
    info.trimmed = sub.trimmed().len();
    info.wall_time = Some(started.elapsed().as_secs_f64());
    Ok(Sample { sub, info })
}
