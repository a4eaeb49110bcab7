use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Affine map from (degree skewness, sampling portion) to an initial
/// exponent guess.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegressorModel {
    pub skewness: f64,
    pub portion: f64,
    pub intercept: f64,
}

impl Default for RegressorModel {
    fn default() -> Self {
        Self::PUBLISHED
    }
}

/// One grid-search observation: the best exponent found for a dataset at a
/// portion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub dataset: String,
    pub skewness: f64,
    pub portion: f64,
    pub alpha: f64,
}

impl RegressorModel {
    /// Coefficients fitted on eleven real-world hypergraphs.
    pub const PUBLISHED: RegressorModel = RegressorModel {
        skewness: -2.358277,
        portion: -0.849945,
        intercept: 5.261775,
    };

    /// Built-in profiles by name.
    pub fn builtin(name: &str) -> Option<Self> {
        matches!(name, "published" | "default").then_some(Self::PUBLISHED)
    }

    pub fn raw(&self, skewness: f64, portion: f64) -> f64 {
        self.skewness * skewness + self.portion * portion + self.intercept
    }

    /// Prediction clamped into `[lo, hi]`.
    pub fn predict(&self, skewness: f64, portion: f64, lo: f64, hi: f64) -> f64 {
        let y = self.raw(skewness, portion);
        if y.is_nan() {
            return lo;
        }
        y.clamp(lo, hi)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: e.line(),
            message: e.to_string(),
        })
    }

    /// Loads a file, or a built-in profile when `spec` names one.
    pub fn resolve(spec: &str) -> Result<Self> {
        match Self::builtin(spec) {
            Some(m) => Ok(m),
            None => Self::load(Path::new(spec)),
        }
    }
}

/// Ordinary least squares for α ≈ c_s·s + c_p·p + b.
pub fn fit_regressor(observations: &[Observation]) -> Result<RegressorModel> {
    if observations.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "need at least 3 observations, got {}",
            observations.len()
        )));
    }
    let n = observations.len();
    let x = DMatrix::from_fn(n, 3, |r, c| match c {
        0 => observations[r].skewness,
        1 => observations[r].portion,
        _ => 1.0,
    });
    let y = DVector::from_iterator(n, observations.iter().map(|o| o.alpha));
    let svd = x.clone().svd(true, true);
    let max_sv = svd.singular_values.max();
    let min_sv = svd.singular_values.min();
    if !(min_sv > 1e-9 * max_sv.max(1.0)) {
        let which = if observations.windows(2).all(|w| w[0].skewness == w[1].skewness) {
            "skewness is constant"
        } else if observations.windows(2).all(|w| w[0].portion == w[1].portion) {
            "portion is constant"
        } else {
            "columns are collinear"
        };
        return Err(Error::RankDeficient(which.into()));
    }
    let beta = svd
        .solve(&y, 1e-12)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    Ok(RegressorModel {
        skewness: beta[0],
        portion: beta[1],
        intercept: beta[2],
    })
}
