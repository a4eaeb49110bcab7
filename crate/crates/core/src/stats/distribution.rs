use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Probability mass over non-negative integers with its cumulative form.
///
/// Masses come from (possibly fractional) counts; `cumulative[i]` is the
/// running count up to `support[i]` divided by the total, so the last entry
/// is exactly 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution")]
pub struct Distribution {
    support: Vec<u64>,
    mass: Vec<f64>,
    #[serde(skip_serializing)]
    cumulative: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDistribution {
    support: Vec<u64>,
    mass: Vec<f64>,
}

impl TryFrom<RawDistribution> for Distribution {
    type Error = Error;

    fn try_from(raw: RawDistribution) -> Result<Self> {
        if raw.support.len() != raw.mass.len() {
            return Err(Error::InvalidArgument("support and mass lengths differ".into()));
        }
        Ok(Distribution::from_weights(raw.support.into_iter().zip(raw.mass)))
    }
}

impl Distribution {
    pub fn empty() -> Self {
        Distribution {
            support: Vec::new(),
            mass: Vec::new(),
            cumulative: Vec::new(),
        }
    }

    /// From `(value, weight)` pairs; repeated values are merged and
    /// non-positive weights ignored.
    pub fn from_weights(items: impl IntoIterator<Item = (u64, f64)>) -> Self {
        let mut items: Vec<(u64, f64)> = items.into_iter().filter(|&(_, w)| w > 0.0).collect();
        items.sort_unstable_by_key(|&(x, _)| x);
        let mut merged: Vec<(u64, f64)> = Vec::with_capacity(items.len());
        for (x, w) in items {
            match merged.last_mut() {
                Some((last, acc)) if *last == x => *acc += w,
                _ => merged.push((x, w)),
            }
        }
        Self::from_sorted(merged)
    }

    /// Index is the value, entry is its count.
    pub fn from_histogram(counts: &[u64]) -> Self {
        Self::from_sorted(
            counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(x, &c)| (x as u64, c as f64))
                .collect(),
        )
    }

    /// From raw observations.
    pub fn from_values(values: impl IntoIterator<Item = u64>) -> Self {
        Self::from_weights(values.into_iter().map(|x| (x, 1.0)))
    }

    fn from_sorted(items: Vec<(u64, f64)>) -> Self {
        let total: f64 = items.iter().map(|&(_, w)| w).sum();
        let mut support = Vec::with_capacity(items.len());
        let mut mass = Vec::with_capacity(items.len());
        let mut cumulative = Vec::with_capacity(items.len());
        let mut running = 0.0;
        for (i, &(x, w)) in items.iter().enumerate() {
            running += w;
            support.push(x);
            mass.push(w / total);
            cumulative.push(if i + 1 == items.len() { 1.0 } else { running / total });
        }
        Distribution {
            support,
            mass,
            cumulative,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn support(&self) -> &[u64] {
        &self.support
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// F(x) = P(X ≤ x).
    pub fn cdf_at(&self, x: u64) -> f64 {
        match self.support.partition_point(|&s| s <= x) {
            0 => 0.0,
            i => self.cumulative[i - 1],
        }
    }

    pub fn mass_at(&self, x: u64) -> f64 {
        self.support
            .binary_search(&x)
            .map(|i| self.mass[i])
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.support
            .iter()
            .zip(&self.mass)
            .map(|(&x, &m)| x as f64 * m)
            .sum()
    }
}

/// Kolmogorov–Smirnov D-statistic: max |F(x) − F̂(x)| over the union of both
/// supports.
pub fn d_statistic(a: &Distribution, b: &Distribution) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let (mut i, mut j) = (0, 0);
    let (mut fa, mut fb) = (0.0f64, 0.0f64);
    let mut gap = 0.0f64;
    while i < a.len() || j < b.len() {
        let xa = a.support.get(i).copied().unwrap_or(u64::MAX);
        let xb = b.support.get(j).copied().unwrap_or(u64::MAX);
        let x = xa.min(xb);
        if xa == x {
            fa = a.cumulative[i];
            i += 1;
        }
        if xb == x {
            fb = b.cumulative[j];
            j += 1;
        }
        gap = gap.max((fa - fb).abs());
    }
    Ok(gap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn histogram_masses() {
        let d = Distribution::from_histogram(&[0, 2, 1]);
        assert_eq!(d.support(), &[1, 2]);
        assert!((d.mass()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.cumulative().last(), Some(&1.0));
        assert!((d.mean() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(d.cdf_at(0), 0.0);
        assert_eq!(d.cdf_at(5), 1.0);
    }

    #[test]
    fn d_statistic_examples() {
        let f = Distribution::from_weights([(1, 0.5), (2, 0.5)]);
        assert_eq!(d_statistic(&f, &f).unwrap(), 0.0);
        let p1 = Distribution::from_values([1]);
        let p2 = Distribution::from_values([2]);
        assert_eq!(d_statistic(&p1, &p2).unwrap(), 1.0);
        let g = Distribution::from_weights([(1, 0.25), (2, 0.75)]);
        assert!((d_statistic(&f, &g).unwrap() - 0.25).abs() < 1e-15);
        assert!(matches!(
            d_statistic(&f, &Distribution::empty()),
            Err(Error::EmptyDistribution)
        ));
    }

    #[test]
    fn serde_round_trip_rebuilds_cumulative() {
        let d = Distribution::from_values([3, 1, 1, 7]);
        let json = serde_json::to_string(&d).unwrap();
        assert!(!json.contains("cumulative"));
        let back: Distribution = serde_json::from_str(&json).unwrap();
        assert_eq!(back.support(), d.support());
        assert_eq!(back.cdf_at(3), d.cdf_at(3));
    }

    fn arb_dist() -> impl Strategy<Value = Distribution> {
        prop::collection::vec((0u64..20, 1u32..10), 1..12)
            .prop_map(|v| Distribution::from_weights(v.into_iter().map(|(x, w)| (x, w as f64))))
    }

    proptest! {
        #[test]
        fn mass_sums_to_one_and_cdf_monotone(d in arb_dist()) {
            let s: f64 = d.mass().iter().sum();
            prop_assert!((s - 1.0).abs() < 1e-9);
            prop_assert!(d.cumulative().windows(2).all(|w| w[0] <= w[1]));
            prop_assert_eq!(*d.cumulative().last().unwrap(), 1.0);
        }

        #[test]
        fn d_statistic_symmetric_and_bounded(a in arb_dist(), b in arb_dist()) {
            let ab = d_statistic(&a, &b).unwrap();
            let ba = d_statistic(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=1.0).contains(&ab));
            if a.support() == b.support() && a.cumulative() == b.cumulative() {
                prop_assert_eq!(ab, 0.0);
            }
        }
    }
}
