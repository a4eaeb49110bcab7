use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A positive rational weight kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weight {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Weight {
    pub fn integer(n: u64) -> Self {
        Weight { num: n, den: 1 }
    }

    pub fn ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Weight {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn ln(self) -> f64 {
        (self.num as f64).ln() - (self.den as f64).ln()
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.num) * u128::from(other.den)).cmp(&(u128::from(other.num) * u128::from(self.den)))
    }
}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weighted sampling without replacement where item `i` is drawn with
/// probability ω_i^α / Σ ω_j^α over the remaining items.
///
/// Items with equal weight share a bucket; a sum tree over the buckets
/// (sorted by weight) stores `|bucket| · (ω/ω_max)^α`. A draw descends the
/// tree to a bucket and takes a uniform member, so draws and removals cost
/// O(log #distinct weights).
#[derive(Clone, Debug)]
pub struct WeightedIndex {
    alpha: f64,
    weights: Vec<Weight>,
    /// (ω/ω_max)^α per bucket.
    scaled: Vec<f64>,
    buckets: Vec<Vec<u32>>,
    bucket_of: Vec<u32>,
    slot: Vec<u32>,
    tree: Vec<f64>,
    leaves: usize,
    remaining: usize,
}

const REMOVED: u32 = u32::MAX;

impl WeightedIndex {
    pub fn new(weights: &[Weight], alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("exponent must be finite and ≥ 0, got {alpha}")));
        }
        if weights.iter().any(|w| w.num == 0) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        let mut distinct: BTreeMap<Weight, Vec<u32>> = BTreeMap::new();
        for (i, &w) in weights.iter().enumerate() {
            distinct.entry(w).or_default().push(i as u32);
        }
        let mut bucket_of = vec![0u32; weights.len()];
        let mut slot = vec![0u32; weights.len()];
        let mut keys = Vec::with_capacity(distinct.len());
        let mut buckets = Vec::with_capacity(distinct.len());
        for (b, (w, ids)) in distinct.into_iter().enumerate() {
            for (s, &id) in ids.iter().enumerate() {
                bucket_of[id as usize] = b as u32;
                slot[id as usize] = s as u32;
            }
            keys.push(w);
            buckets.push(ids);
        }
        let leaves = buckets.len().next_power_of_two().max(1);
        let mut index = WeightedIndex {
            alpha,
            weights: keys,
            scaled: Vec::new(),
            buckets,
            bucket_of,
            slot,
            tree: vec![0.0; 2 * leaves],
            leaves,
            remaining: weights.len(),
        };
        index.rescale();
        Ok(index)
    }

    pub fn from_integers(weights: &[u64], alpha: f64) -> Result<Self> {
        let w: Vec<Weight> = weights.iter().map(|&x| Weight::integer(x)).collect();
        Self::new(&w, alpha)
    }

    /// Recomputes bucket factors relative to the heaviest non-empty bucket.
    /// Needed when large exponents make every remaining factor underflow.
    fn rescale(&mut self) {
        let top = self
            .buckets
            .iter()
            .rposition(|b| !b.is_empty())
            .map(|i| self.weights[i].ln())
            .unwrap_or(0.0);
        self.scaled = self
            .weights
            .iter()
            .map(|w| (self.alpha * (w.ln() - top)).exp())
            .collect();
        for b in 0..self.leaves {
            self.tree[self.leaves + b] = self.leaf_value(b);
        }
        for i in (1..self.leaves).rev() {
            self.tree[i] = self.tree[2 * i] + self.tree[2 * i + 1];
        }
    }

    fn leaf_value(&self, b: usize) -> f64 {
        match self.buckets.get(b) {
            Some(ids) if !ids.is_empty() => ids.len() as f64 * self.scaled[b],
            _ => 0.0,
        }
    }

    fn refresh(&mut self, b: usize) {
        let mut i = self.leaves + b;
        self.tree[i] = self.leaf_value(b);
        while i > 1 {
            i /= 2;
            self.tree[i] = self.tree[2 * i] + self.tree[2 * i + 1];
        }
    }

    pub fn len(&self) -> usize {
        self.remaining
    }

    pub fn is_empty(&self) -> bool {
        self.remaining == 0
    }

    pub fn contains(&self, id: u32) -> bool {
        self.slot.get(id as usize).is_some_and(|&s| s != REMOVED)
    }

    /// Σ (ω/ω_max)^α over remaining items.
    pub fn total(&self) -> f64 {
        self.tree[1]
    }

    /// Current draw probability of `id` (0 once removed).
    pub fn probability(&self, id: u32) -> f64 {
        if !self.contains(id) {
            return 0.0;
        }
        self.scaled[self.bucket_of[id as usize] as usize] / self.total()
    }

    /// Draws one item and removes it.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<u32> {
        if self.remaining == 0 {
            return Err(Error::EmptyIndex);
        }
        if !(self.total() > 0.0) || !self.total().is_finite() {
            self.rescale();
        }
        let mut u = rng.random::<f64>() * self.total();
        let mut node = 1;
        while node < self.leaves {
            let (left, right) = (self.tree[2 * node], self.tree[2 * node + 1]);
            node = if right <= 0.0 || (left > 0.0 && u < left) {
                2 * node
            } else {
                u -= left;
                2 * node + 1
            };
        }
        let b = node - self.leaves;
        let members = &self.buckets[b];
        let id = members[rng.random_range(0..members.len())];
        self.remove(id);
        Ok(id)
    }

    /// Removes `id`; returns false if it was already gone.
    pub fn remove(&mut self, id: u32) -> bool {
        if !self.contains(id) {
            return false;
        }
        let b = self.bucket_of[id as usize] as usize;
        let s = self.slot[id as usize] as usize;
        let bucket = &mut self.buckets[b];
        bucket.swap_remove(s);
        if let Some(&moved) = bucket.get(s) {
            self.slot[moved as usize] = s as u32;
        }
        self.slot[id as usize] = REMOVED;
        self.remaining -= 1;
        self.refresh(b);
        true
    }
}
