use serde::{Deserialize, Serialize};

/// {0, 2^-3, 2^-2.5, …, 2^6}: 20 values.
pub fn default_grid() -> Vec<f64> {
    std::iter::once(0.0)
        .chain((0..=18).map(|i| 2f64.powf(-3.0 + 0.5 * i as f64)))
        .collect()
}

/// {0, 2^-1, 2^0, …, 2^6}, the coarser grid used to tune the ablation variants.
pub fn coarse_grid() -> Vec<f64> {
    std::iter::once(0.0).chain((-1..=6).map(|i| 2f64.powi(i))).collect()
}

pub(crate) fn validate_grid(grid: &[f64]) -> crate::Result<()> {
    if grid.is_empty()
        || grid.iter().any(|a| !(*a >= 0.0 && a.is_finite()))
        || grid.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(crate::Error::InvalidArgument(
            "exponent grid must be non-empty, finite, non-negative and strictly ascending".into(),
        ));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub index: usize,
    pub alpha: f64,
    pub loss: f64,
    /// Distinct grid points whose loss was evaluated.
    pub evaluations: usize,
    /// (α, loss) in evaluation order.
    pub trace: Vec<(f64, f64)>,
}

struct Memo<'a, F> {
    grid: &'a [f64],
    loss: F,
    cache: Vec<Option<f64>>,
    trace: Vec<(f64, f64)>,
}

impl<F: FnMut(f64) -> f64> Memo<'_, F> {
    fn at(&mut self, i: usize) -> f64 {
        if let Some(v) = self.cache[i] {
            return v;
        }
        let v = (self.loss)(self.grid[i]);
        self.cache[i] = Some(v);
        self.trace.push((self.grid[i], v));
        v
    }

    fn finish(self, index: usize) -> SearchResult {
        SearchResult {
            index,
            alpha: self.grid[index],
            loss: self.cache[index].expect("evaluated"),
            evaluations: self.trace.len(),
            trace: self.trace,
        }
    }
}

/// Local search over an ascending grid starting near `start`.
///
/// The grid points bracketing `start` (last below it, first at or above it)
/// are compared and the better one, ties going to the smaller exponent,
/// becomes the current point. The walk moves away from `start` through
/// strictly decreasing losses. If the first step in that direction does not
/// improve, the opposite neighbour is tried, so the result is never worse
/// than an evaluated neighbour.
pub fn hill_climb<F: FnMut(f64) -> f64>(grid: &[f64], start: f64, loss: F) -> SearchResult {
    assert!(!grid.is_empty(), "empty grid");
    let mut m = Memo {
        grid,
        loss,
        cache: vec![None; grid.len()],
        trace: Vec::new(),
    };
    let right = grid.partition_point(|&s| s < start);
    let left = right.checked_sub(1);
    let mut i = match (left, (right < grid.len()).then_some(right)) {
        (Some(l), Some(r)) => {
            if m.at(r) < m.at(l) {
                r
            } else {
                l
            }
        }
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (None, None) => unreachable!(),
    };
    m.at(i);
    let forward = grid[i] > start;
    let step = |i: usize, up: bool| -> Option<usize> {
        if up {
            (i + 1 < grid.len()).then_some(i + 1)
        } else {
            i.checked_sub(1)
        }
    };
    let mut direction = forward;
    let mut settled = false;
    loop {
        match step(i, direction) {
            Some(j) if m.at(j) < m.at(i) => {
                i = j;
                settled = true;
            }
            _ if !settled => {
                settled = true;
                direction = !direction;
            }
            _ => break,
        }
    }
    m.finish(i)
}

/// Evaluates every grid point; ties go to the smaller exponent.
pub fn grid_search<F: FnMut(f64) -> f64>(grid: &[f64], loss: F) -> SearchResult {
    let mut m = Memo {
        grid,
        loss,
        cache: vec![None; grid.len()],
        trace: Vec::new(),
    };
    let mut best = 0;
    for i in 0..grid.len() {
        if m.at(i) < m.at(best) {
            best = i;
        }
    }
    m.finish(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grids() {
        let g = default_grid();
        assert_eq!(g.len(), 20);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[1], 0.125);
        assert_eq!(*g.last().unwrap(), 64.0);
        assert!(validate_grid(&g).is_ok());
        assert_eq!(coarse_grid(), vec![0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]);
        assert!(validate_grid(&[1.0, 1.0]).is_err());
    }

    #[test]
    fn unimodal_interior_minimum() {
        let g = default_grid();
        for target in 0..20 {
            let loss = |a: f64| (a.max(1e-3).log2() - g[target].max(1e-3).log2()).abs();
            for start in [0.0, 1.0, 5.3, 64.0, 100.0] {
                let r = hill_climb(&g, start, loss);
                assert_eq!(r.index, target, "start {start}");
                assert!(r.evaluations <= g.len());
            }
        }
    }

    #[test]
    fn below_grid_climbs_right() {
        let g = [0.0, 1.0, 2.0, 3.0];
        let r = hill_climb(&g, -5.0, |a| (a - 2.0).abs());
        assert_eq!(r.index, 2);
        assert_eq!(r.trace.iter().map(|t| t.0).collect::<Vec<_>>(), vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn start_on_local_minimum_probes_both_neighbours() {
        let g = [0.0, 1.0, 2.0, 3.0, 4.0];
        let r = hill_climb(&g, 2.0, |a| (a - 2.0).abs());
        assert_eq!(r.alpha, 2.0);
        let mut probed: Vec<f64> = r.trace.iter().map(|t| t.0).collect();
        probed.sort_by(f64::total_cmp);
        assert_eq!(probed, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn bracket_tie_prefers_smaller() {
        let g = [0.0, 1.0, 2.0];
        let r = hill_climb(&g, 0.5, |a| if a == 2.0 { 1.0 } else { 0.0 });
        assert_eq!(r.alpha, 0.0);
    }

    proptest! {
        #[test]
        fn result_is_a_local_minimum(losses in prop::collection::vec(0.0f64..1.0, 1..20), start in -1.0f64..25.0) {
            let grid: Vec<f64> = (0..losses.len()).map(|i| i as f64).collect();
            let r = hill_climb(&grid, start, |a| losses[a as usize]);
            prop_assert!(r.evaluations <= grid.len());
            let evaluated = |a: f64| r.trace.iter().any(|t| t.0 == a);
            for j in [r.index.checked_sub(1), Some(r.index + 1)].into_iter().flatten() {
                if j < grid.len() && evaluated(grid[j]) {
                    prop_assert!(r.loss <= losses[j]);
                }
            }
            let exhaustive = grid_search(&grid, |a| losses[a as usize]);
            prop_assert!(exhaustive.loss <= r.loss);
        }
    }
}
