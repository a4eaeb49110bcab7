//! Acceptance criteria, one line each. Run alone with
//! `cargo test -p hypersample-cli --test acceptance [-- C3 C7]`.
//!
//! Criterion 9 needs real datasets: point `HYPERSAMPLE_DATA` at a directory
//! holding `email-Enron`, `contact-primary-school` and `NDC-classes` either
//! as plain `<name>.hyg` files or in the nverts/simplices layout
//! (`<name>/<name>-nverts.txt`). Without it the criterion prints SKIP.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use hypersample::bench::{self, BenchmarkPlan, DatasetSource};
use hypersample::eval::{average_ranks, Statistic};
use hypersample::hypergraph::io::{self as hio, Format};
use hypersample::midas::{
    alpha_seed, default_grid, fit_regressor, midas, midas_basic, midas_grid, skewness, MidasParams, Observation,
    RegressorModel, WeightMode, WeightedIndex,
};
use hypersample::samplers::{rhs, Method};
use hypersample::seed;
use hypersample::stats::{
    connected_component_portions, d_statistic, degree_distribution, density, effective_diameter,
    global_clustering_coefficient, intersection_size_distribution, overlapness, pair_degree_distribution,
    rank_proxy, singular_spectrum_with, Distribution, SpectrumMethod, StatOptions, StatReport,
};
use hypersample::synthetic::SyntheticConfig;
use hypersample::theory::BiasModel;
use hypersample::Hypergraph;

/// Seed of the desk-scale synthetic instance shared by criteria 5, 6 and 8.
const DESK_SEED: u64 = 1;

enum Status {
    Pass,
    Fail,
    Skip,
}

struct Outcome {
    status: Status,
    detail: String,
}

impl Outcome {
    fn check(ok: bool, detail: String) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }
}

// ---------------------------------------------------------------------------
// Shared helpers

fn chi_square_p(observed: &[u64], expected: &[f64]) -> f64 {
    let stat: f64 = observed
        .iter()
        .zip(expected)
        .map(|(&o, &e)| (o as f64 - e).powi(2) / e)
        .sum();
    1.0 - ChiSquared::new((observed.len() - 1) as f64).unwrap().cdf(stat)
}

/// Two-sample chi-square homogeneity test on a 2×k table.
fn homogeneity_p(a: &[u64], b: &[u64]) -> f64 {
    let (na, nb) = (a.iter().sum::<u64>() as f64, b.iter().sum::<u64>() as f64);
    let mut stat = 0.0;
    let mut cells = 0;
    for (&x, &y) in a.iter().zip(b) {
        let col = (x + y) as f64;
        if col == 0.0 {
            continue;
        }
        cells += 1;
        let (ea, eb) = (col * na / (na + nb), col * nb / (na + nb));
        stat += (x as f64 - ea).powi(2) / ea + (y as f64 - eb).powi(2) / eb;
    }
    1.0 - ChiSquared::new((cells - 1) as f64).unwrap().cdf(stat)
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy / (sxx * syy).sqrt()
}

fn spearman(x: &[f64], y: &[f64]) -> f64 {
    pearson(&average_ranks(x), &average_ranks(y))
}

fn random_hypergraph(rng: &mut ChaCha8Rng, max_nodes: u64, max_edges: usize, max_size: usize) -> Hypergraph {
    let n = rng.random_range(2..=max_nodes);
    let m = rng.random_range(1..=max_edges);
    let edges: Vec<Vec<u64>> = (0..m)
        .map(|_| {
            let k = rng.random_range(1..=max_size.min(n as usize));
            (0..k).map(|_| rng.random_range(0..n)).collect()
        })
        .collect();
    Hypergraph::from_labeled_edges(edges).unwrap().0
}

fn members(h: &Hypergraph) -> Vec<HashSet<u32>> {
    h.edges().map(|e| e.iter().copied().collect()).collect()
}

fn desk() -> Hypergraph {
    SyntheticConfig::desk(DESK_SEED).generate().unwrap()
}

/// Degree D-statistic of one MiDaS-Basic draw, rebuilt from public pieces.
fn loss_oracle(h: &Hypergraph, reference: &Distribution, portion: f64, alpha: f64, loss_seed: u64) -> f64 {
    let sub = midas_basic(h, portion, alpha, WeightMode::Min, alpha_seed(loss_seed, alpha)).unwrap();
    d_statistic(reference, &degree_distribution(&sub.to_hypergraph())).unwrap()
}

// ---------------------------------------------------------------------------
// 1. Statistics against brute force

fn brute_pair_degrees(h: &Hypergraph) -> Masses {
    let sets = members(h);
    let n = h.num_nodes() as u32;
    let mut counts = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let c = sets.iter().filter(|s| s.contains(&u) && s.contains(&v)).count() as u64;
            if c > 0 {
                counts.push(c);
            }
        }
    }
    mass_from_counts(&counts)
}

fn brute_intersections(h: &Hypergraph) -> Masses {
    let sets = members(h);
    let mut sizes = Vec::new();
    for i in 0..sets.len() {
        for j in i + 1..sets.len() {
            let c = sets[i].intersection(&sets[j]).count() as u64;
            if c > 0 {
                sizes.push(c);
            }
        }
    }
    mass_from_counts(&sizes)
}

/// Support and probability mass, ascending support.
type Masses = (Vec<u64>, Vec<f64>);

/// Histogram of observations normalized by their count.
fn mass_from_counts(values: &[u64]) -> Masses {
    let mut hist = BTreeMap::new();
    for &v in values {
        *hist.entry(v).or_insert(0u64) += 1;
    }
    let total: u64 = hist.values().sum();
    let support = hist.keys().copied().collect();
    let mass = hist.values().map(|&c| c as f64 / total as f64).collect();
    (support, mass)
}

fn same_distribution(a: &Distribution, b: &Masses) -> bool {
    a.support() == b.0.as_slice() && a.mass() == b.1.as_slice()
}

fn clique_distances(h: &Hypergraph) -> Vec<Vec<Option<usize>>> {
    let n = h.num_nodes();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for e in h.edges() {
        for &u in e {
            for &v in e {
                if u != v {
                    d[u as usize][v as usize] = Some(1);
                }
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

fn brute_components(h: &Hypergraph) -> Masses {
    let d = clique_distances(h);
    let n = h.num_nodes();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for s in 0..n {
        if !seen[s] {
            let comp: Vec<usize> = (0..n).filter(|&t| d[s][t].is_some()).collect();
            for &t in &comp {
                seen[t] = true;
            }
            sizes.push(comp.len() as u64);
        }
    }
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let total: u64 = sizes.iter().sum();
    let support = (1..=sizes.len() as u64).collect();
    (support, sizes.iter().map(|&s| s as f64 / total as f64).collect())
}

/// Interpolated 90th percentile over ordered reachable pairs.
fn brute_effective_diameter(h: &Hypergraph) -> Option<f64> {
    let d = clique_distances(h);
    let mut hist: BTreeMap<usize, u64> = BTreeMap::new();
    for (i, row) in d.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if let (true, Some(x)) = (i != j, x) {
                *hist.entry(*x).or_insert(0) += 1;
            }
        }
    }
    let total: u64 = hist.values().sum();
    if total == 0 {
        return None;
    }
    let max = *hist.keys().last().unwrap();
    let (mut prev, mut running) = (0.0f64, 0u64);
    for dist in 1..=max {
        let c = hist.get(&dist).copied().unwrap_or(0);
        running += c;
        let f = running as f64 / total as f64;
        if f >= 0.9 && c > 0 {
            return Some((dist - 1) as f64 + (0.9 - prev) / (f - prev));
        }
        prev = f;
    }
    Some(max as f64)
}

fn svd_relative_variances(h: &Hypergraph) -> Vec<f64> {
    let mut a = DMatrix::<f64>::zeros(h.num_nodes(), h.num_edges());
    for (j, e) in h.edges().enumerate() {
        for &v in e {
            a[(v as usize, j)] = 1.0;
        }
    }
    let mut s: Vec<f64> = a.svd(false, false).singular_values.iter().map(|x| x * x).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    let total: f64 = s.iter().sum();
    s.iter().map(|x| x / total).collect()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    let mut worst_sv = 0.0f64;
    for i in 0..50 {
        let h = random_hypergraph(&mut rng, 40, 50, 6);
        let mut fail = |what: &str| failures.push(format!("#{i} {what}"));
        if !same_distribution(&pair_degree_distribution(&h, 1000, 0), &brute_pair_degrees(&h)) {
            fail("pair degree");
        }
        if !same_distribution(&intersection_size_distribution(&h), &brute_intersections(&h)) {
            fail("intersection size");
        }
        if !same_distribution(&connected_component_portions(&h), &brute_components(&h)) {
            fail("components");
        }
        let sizes: usize = h.edges().map(|e| e.len()).sum();
        if density(&h) != h.num_edges() as f64 / h.num_nodes() as f64 {
            fail("density");
        }
        if overlapness(&h) != sizes as f64 / h.num_nodes() as f64 {
            fail("overlapness");
        }
        if effective_diameter(&h, usize::MAX, 0, 0).ok() != brute_effective_diameter(&h) {
            fail("diameter");
        }
        let oracle = svd_relative_variances(&h);
        let rank = rank_proxy(&h);
        for (method, k) in [(SpectrumMethod::Auto, rank), (SpectrumMethod::Iterative, rank.min(3))] {
            match singular_spectrum_with(&h, k, method) {
                Ok(s) => {
                    let err = s
                        .rel_variance
                        .iter()
                        .zip(&oracle)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    worst_sv = worst_sv.max(err);
                    if err > 1e-8 || s.rel_variance.len() != k {
                        fail("spectrum");
                    }
                }
                Err(_) => fail("spectrum error"),
            }
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "50 instances; max spectrum error {worst_sv:.1e}; mismatches: {}",
            if failures.is_empty() { "none".into() } else { failures.join(", ") }
        ),
    )
}

// ---------------------------------------------------------------------------
// 2. D-statistic

fn d_oracle(a: &Distribution, b: &Distribution) -> f64 {
    let mut xs: Vec<u64> = a.support().iter().chain(b.support()).copied().collect();
    xs.sort_unstable();
    xs.dedup();
    let cdf = |d: &Distribution, x: u64| match d.support().partition_point(|&s| s <= x) {
        0 => 0.0,
        i => d.cumulative()[i - 1],
    };
    xs.iter().map(|&x| (cdf(a, x) - cdf(b, x)).abs()).fold(0.0, f64::max)
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let random = |rng: &mut ChaCha8Rng| {
        let k = rng.random_range(1..=30);
        Distribution::from_weights((0..k).map(|_| {
            let w = if rng.random_bool(0.5) {
                rng.random_range(1..20) as f64
            } else {
                rng.random::<f64>() + 1e-3
            };
            (rng.random_range(0..60), w)
        }))
    };
    let mut mismatches = 0;
    for _ in 0..1000 {
        let (a, b) = (random(&mut rng), random(&mut rng));
        if d_statistic(&a, &b).unwrap() != d_oracle(&a, &b) {
            mismatches += 1;
        }
    }
    Outcome::check(mismatches == 0, format!("1000 pairs, {mismatches} mismatches"))
}

// ---------------------------------------------------------------------------
// 3. Weighted index

fn permutation_probability(weights: &[f64], order: &[usize]) -> f64 {
    let mut remaining: f64 = weights.iter().sum();
    let mut p = 1.0;
    for &i in order {
        p *= weights[i] / remaining;
        remaining -= weights[i];
    }
    p
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Linear scan over the remaining weights.
fn naive_draw_sequence(weights: &[f64], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut left: Vec<usize> = (0..weights.len()).collect();
    let mut out = Vec::new();
    while !left.is_empty() {
        let total: f64 = left.iter().map(|&i| weights[i]).sum();
        let mut u = rng.random::<f64>() * total;
        let mut pick = left.len() - 1;
        for (k, &i) in left.iter().enumerate() {
            if u < weights[i] {
                pick = k;
                break;
            }
            u -= weights[i];
        }
        out.push(left.remove(pick));
    }
    out
}

fn criterion_3() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let ints: Vec<u64> = (0..20).map(|i| (i * 7 % 8) as u64 + 1).collect();
    for alpha in [0.0, 0.5, 1.0, 2.0] {
        let w: Vec<f64> = ints.iter().map(|&x| (x as f64).powf(alpha)).collect();
        let total: f64 = w.iter().sum();
        let mut counts = vec![0u64; 20];
        for t in 0..10_000u64 {
            let mut idx = WeightedIndex::from_integers(&ints, alpha).unwrap();
            counts[idx.draw(&mut seed::rng(t)).unwrap() as usize] += 1;
        }
        let expected: Vec<f64> = w.iter().map(|x| 1e4 * x / total).collect();
        let p = chi_square_p(&counts, &expected);
        ok &= p > 0.01;
        notes.push(format!("first draw α={alpha} p={p:.3}"));
    }

    // Whole sequences on six hyperedges: 720 outcomes enumerated exactly.
    let six: [u64; 6] = [1, 1, 2, 4, 8, 8];
    let orders = permutations(6);
    let index_of: HashMap<Vec<usize>, usize> = orders.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    for alpha in [0.0, 0.5, 1.0, 2.0] {
        let w: Vec<f64> = six.iter().map(|&x| (x as f64).powf(alpha)).collect();
        let exact: Vec<f64> = orders.iter().map(|o| permutation_probability(&w, o)).collect();
        let trials = 100_000u64;
        let mut counts = vec![0u64; orders.len()];
        let mut naive = vec![0u64; orders.len()];
        let mut nrng = ChaCha8Rng::seed_from_u64(303 + alpha.to_bits());
        for t in 0..trials {
            let mut idx = WeightedIndex::from_integers(&six, alpha).unwrap();
            let mut rng = seed::rng(seed::derive(alpha.to_bits(), t));
            let seq: Vec<usize> = (0..6).map(|_| idx.draw(&mut rng).unwrap() as usize).collect();
            counts[index_of[&seq]] += 1;
            naive[index_of[&naive_draw_sequence(&w, &mut nrng)]] += 1;
        }
        let tv: f64 = 0.5
            * counts
                .iter()
                .zip(&exact)
                .map(|(&c, &p)| (c as f64 / trials as f64 - p).abs())
                .sum::<f64>();
        let tv_naive: f64 = 0.5
            * naive
                .iter()
                .zip(&exact)
                .map(|(&c, &p)| (c as f64 / trials as f64 - p).abs())
                .sum::<f64>();
        let expected: Vec<f64> = exact.iter().map(|p| p * trials as f64).collect();
        // Merge sparse cells so every expected count is at least 5.
        let (mut obs_m, mut exp_m, mut acc) = (Vec::new(), Vec::new(), (0u64, 0.0f64));
        let mut order: Vec<usize> = (0..orders.len()).collect();
        order.sort_by(|&a, &b| expected[a].total_cmp(&expected[b]));
        for i in order {
            acc = (acc.0 + counts[i], acc.1 + expected[i]);
            if acc.1 >= 5.0 {
                obs_m.push(acc.0);
                exp_m.push(acc.1);
                acc = (0, 0.0);
            }
        }
        if acc.1 > 0.0 {
            *obs_m.last_mut().unwrap() += acc.0;
            *exp_m.last_mut().unwrap() += acc.1;
        }
        let p = chi_square_p(&obs_m, &exp_m);
        let pinned = alpha == 2.0;
        ok &= p > 0.01 && (!pinned || tv < 0.02);
        notes.push(format!(
            "sequences α={alpha} TV={tv:.4}{} naive-TV={tv_naive:.4} p={p:.3}",
            if pinned { " (pinned < 0.02)" } else { "" }
        ));
    }
    Outcome::check(ok, notes.join("; "))
}

// ---------------------------------------------------------------------------
// 4. Zero exponent behaves like uniform hyperedge sampling

fn criterion_4() -> Outcome {
    let edges: Vec<Vec<u64>> = vec![
        vec![0, 1],
        vec![0, 2],
        vec![0, 3],
        vec![0, 4, 5],
        vec![1, 2, 6],
        vec![7],
        vec![8, 9],
        vec![0, 1, 2, 3],
        vec![10],
        vec![0, 9],
    ];
    let h = Hypergraph::from_labeled_edges(edges).unwrap().0;
    assert_eq!(h.num_edges(), 10);
    let subsets: Vec<Vec<u32>> = {
        let mut s = Vec::new();
        for a in 0..10u32 {
            for b in a + 1..10 {
                for c in b + 1..10 {
                    s.push(vec![a, b, c]);
                }
            }
        }
        s
    };
    let pos: HashMap<Vec<u32>, usize> = subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    let trials = 10_000u64;
    let mut basic = vec![0u64; subsets.len()];
    let mut uniform = vec![0u64; subsets.len()];
    for t in 0..trials {
        let sub = midas_basic(&h, 0.3, 0.0, WeightMode::Min, t).unwrap();
        basic[pos[sub.edge_ids()]] += 1;
        let r = rhs(&h, 3, &mut seed::rng(seed::derive(t, 4))).unwrap();
        uniform[pos[r.edge_ids()]] += 1;
    }
    let expected = vec![trials as f64 / subsets.len() as f64; subsets.len()];
    let p_exact = chi_square_p(&basic, &expected);
    let p_two = homogeneity_p(&basic, &uniform);
    Outcome::check(
        p_exact > 0.01 && p_two > 0.01,
        format!("120 subsets; vs exact uniform p={p_exact:.3}; vs RHS sample p={p_two:.3}"),
    )
}

// ---------------------------------------------------------------------------
// 5. Sampled node degree rises with the exponent

fn criterion_5() -> Outcome {
    let h = desk();
    let grid = default_grid();
    let seeds = 5u64;
    let mut mean = vec![0.0f64; grid.len()];
    let mut per_seed = Vec::new();
    for s in 0..seeds {
        let curve: Vec<f64> = grid
            .iter()
            .map(|&a| {
                let sub = midas_basic(&h, 0.3, a, WeightMode::Min, seed::derive(s, a.to_bits())).unwrap();
                let nodes = sub.node_ids();
                nodes.iter().map(|&v| h.degree(v) as f64).sum::<f64>() / nodes.len() as f64
            })
            .collect();
        per_seed.push(spearman(&grid, &curve));
        for (m, c) in mean.iter_mut().zip(&curve) {
            *m += c / seeds as f64;
        }
    }
    let rho = spearman(&grid, &mean);
    let avg_rho = per_seed.iter().sum::<f64>() / seeds as f64;
    Outcome::check(
        rho >= 0.9,
        format!(
            "skewness {:.2}; ρ of seed-averaged curve {rho:.4}; mean per-seed ρ {avg_rho:.4}; degree {:.2} → {:.2}",
            skewness(&h),
            mean[0],
            mean[grid.len() - 1]
        ),
    )
}

// ---------------------------------------------------------------------------
// 6. Bias monotonicity and downward closure

fn brute_ln_weights(h: &Hypergraph) -> Vec<(u64, f64)> {
    h.edges()
        .map(|e| {
            let degs: Vec<u64> = e.iter().map(|&v| h.degree(v) as u64).collect();
            (*degs.iter().min().unwrap(), (*degs.iter().min().unwrap() as f64).ln())
        })
        .collect()
}

fn brute_condition(rows: &[(u64, f64)], k: u64) -> bool {
    let mean = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
    let touched: Vec<f64> = rows.iter().filter(|r| r.0 <= k).map(|r| r.1).collect();
    touched.is_empty() || touched.iter().copied().fold(f64::NEG_INFINITY, f64::max) < mean
}

fn brute_h(rows: &[(u64, f64)], alpha: f64, k: u64) -> f64 {
    let w: Vec<f64> = rows.iter().map(|r| (alpha * r.1).exp()).collect();
    let total: f64 = w.iter().sum();
    let low: f64 = rows.iter().zip(&w).filter(|(r, _)| r.0 <= k).map(|(_, w)| w).sum();
    1.0 - low / total
}

fn criterion_6() -> Outcome {
    let h = desk();
    let rows = brute_ln_weights(&h);
    let model = BiasModel::new(&h, WeightMode::Min);
    let k_star = model.k_star();
    let mut degrees: Vec<u64> = h.degrees().into_iter().map(|d| d as u64).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let brute_k_star = degrees
        .iter()
        .rev()
        .copied()
        .find(|&k| rows.iter().any(|r| r.0 <= k) && brute_condition(&rows, k));
    let grid = default_grid();
    let mut violations = 0;
    let mut checked = 0;
    if let Some(ks) = k_star {
        for &k in degrees.iter().filter(|&&k| k <= ks) {
            let hs: Vec<f64> = grid.iter().map(|&a| brute_h(&rows, a, k)).collect();
            let lib: Vec<f64> = grid.iter().map(|&a| 1.0 - model.low_degree_mass(a, k)).collect();
            checked += 1;
            if hs.windows(2).any(|w| w[1] < w[0] - 1e-12) || lib.windows(2).any(|w| w[1] < w[0] - 1e-12) {
                violations += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut closure_failures = 0;
    for _ in 0..50 {
        let g = random_hypergraph(&mut rng, 30, 50, 5);
        let rows = brute_ln_weights(&g);
        let m = BiasModel::new(&g, WeightMode::Min);
        let max = g.max_degree() as u64;
        let lib: Vec<bool> = (0..=max).map(|k| m.condition_holds(k)).collect();
        let brute: Vec<bool> = (0..=max).map(|k| brute_condition(&rows, k)).collect();
        let closed = (0..lib.len()).all(|k| !lib[k] || lib[..k].iter().all(|&b| b));
        if lib != brute || !closed {
            closure_failures += 1;
        }
    }
    Outcome::check(
        k_star.is_some() && k_star == brute_k_star && violations == 0 && closure_failures == 0,
        format!(
            "k*(Min)={k_star:?} (brute {brute_k_star:?}); {checked} thresholds, {violations} non-monotone; \
             closure failures {closure_failures}/50"
        ),
    )
}

// ---------------------------------------------------------------------------
// 7. Hill climbing against exhaustive search

fn criterion_7() -> Outcome {
    let grid = default_grid();
    let portions = [0.1, 0.2, 0.3, 0.4, 0.5];
    let prefs = [0.85, 0.9, 0.95];
    struct Toy {
        graph: Hypergraph,
        portion: f64,
        seed: u64,
        losses: Vec<f64>,
    }
    let toys: Vec<Toy> = (0..10)
        .map(|i| {
            let mut cfg = SyntheticConfig::desk(700 + i as u64);
            cfg.preference = prefs[i % prefs.len()];
            let graph = cfg.generate().unwrap();
            let portion = portions[i % portions.len()];
            let reference = degree_distribution(&graph);
            let seed = 7_000 + i as u64;
            let losses = grid
                .iter()
                .map(|&a| loss_oracle(&graph, &reference, portion, a, seed))
                .collect();
            Toy {
                graph,
                portion,
                seed,
                losses,
            }
        })
        .collect();
    let observations: Vec<Observation> = toys
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let best = (0..grid.len()).min_by(|&a, &b| t.losses[a].total_cmp(&t.losses[b])).unwrap();
            Observation {
                dataset: format!("toy{i}"),
                skewness: skewness(&t.graph),
                portion: t.portion,
                alpha: grid[best],
            }
        })
        .collect();
    let mut gaps = Vec::new();
    let mut evals = Vec::new();
    let mut ok = true;
    for (i, t) in toys.iter().enumerate() {
        let rest: Vec<Observation> = observations.iter().filter(|o| o.dataset != format!("toy{i}")).cloned().collect();
        let model = fit_regressor(&rest).unwrap_or(RegressorModel::PUBLISHED);
        let params = MidasParams {
            model,
            ..MidasParams::default()
        };
        let out = midas(&t.graph, t.portion, &params, t.seed).unwrap();
        let min = t.losses.iter().copied().fold(f64::INFINITY, f64::min);
        let chosen = grid.iter().position(|&a| a == out.alpha).expect("grid point");
        // The reported loss must be the oracle's value at the chosen point.
        ok &= out.loss == t.losses[chosen];
        if std::env::var_os("ACCEPTANCE_DEBUG").is_some() {
            eprintln!(
                "toy{i} s={:.2} p={} start={:?} chose {} argmin {} gap {:.3} losses {:?}",
                skewness(&t.graph),
                t.portion,
                out.alpha_initial,
                out.alpha,
                observations[i].alpha,
                t.losses[chosen] - min,
                t.losses.iter().map(|l| (l * 1000.0).round() / 1000.0).collect::<Vec<_>>()
            );
        }
        gaps.push(t.losses[chosen] - min);
        evals.push(out.evaluations as f64 / grid.len() as f64);
    }
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    let mean_eval = evals.iter().sum::<f64>() / evals.len() as f64;
    ok &= worst <= 0.02 && mean_eval <= 0.6;
    Outcome::check(
        ok,
        format!(
            "10 toys; worst L′ gap {worst:.4} (≤ 0.02); mean evaluated fraction {:.1}% (≤ 60%)",
            100.0 * mean_eval
        ),
    )
}

// ---------------------------------------------------------------------------
// 8. Desk-scale comparative ordering

/// Regressor fitted by exhaustive search on synthetic instances other than
/// the one evaluated.
fn family_regressor() -> RegressorModel {
    let grid = default_grid();
    let mut obs = Vec::new();
    for (i, pref) in [0.8, 0.85, 0.9, 0.95].into_iter().enumerate() {
        for base in [100u64, 200] {
            let mut cfg = SyntheticConfig::desk(base + i as u64);
            cfg.preference = pref;
            let g = cfg.generate().unwrap();
            for p in [0.1, 0.2, 0.3, 0.4, 0.5] {
                let out = midas_grid(&g, p, WeightMode::Min, &grid, base).unwrap();
                obs.push(Observation {
                    dataset: format!("{pref}-{base}"),
                    skewness: out.skewness,
                    portion: p,
                    alpha: out.alpha,
                });
            }
        }
    }
    fit_regressor(&obs).unwrap()
}

fn criterion_8() -> Outcome {
    let model = family_regressor();
    let methods: Vec<Method> = ["rns", "rdn", "rw", "ff", "rhs", "tihs"]
        .iter()
        .map(|m| m.parse().unwrap())
        .chain([Method::Midas(MidasParams {
            model,
            ..MidasParams::default()
        })])
        .collect();
    let plan = BenchmarkPlan {
        datasets: vec![DatasetSource::Synthetic {
            preset: "desk".into(),
            seed: DESK_SEED,
        }],
        methods,
        trials: 3,
        seed: 8,
        ..BenchmarkPlan::default()
    };
    let out = bench::run(&plan).unwrap();
    let agg = out.aggregate();
    let rank = |stat: Statistic, m: &str| agg.score(stat, m).map(|s| s.rank).unwrap_or(f64::NAN);
    let degree: Vec<(String, f64)> = agg
        .statistics
        .iter()
        .find(|s| s.stat == Statistic::Degree)
        .unwrap()
        .methods
        .iter()
        .map(|m| (m.method.clone(), m.rank))
        .collect();
    let midas_deg = rank(Statistic::Degree, "midas");
    let best_deg = degree.iter().all(|(m, r)| m == "midas" || midas_deg < *r);
    let others = [Statistic::Density, Statistic::Overlapness, Statistic::Diameter];
    let not_worse = others.iter().all(|&s| rank(s, "midas") <= rank(s, "rhs"));
    let mut detail = format!(
        "{} cells, {} failed; Degree ranks {}; midas/rhs {}",
        out.cells.len(),
        out.failures.len(),
        degree
            .iter()
            .map(|(m, r)| format!("{m} {r:.2}"))
            .collect::<Vec<_>>()
            .join(", "),
        others
            .iter()
            .map(|&s| format!("{} {:.2}/{:.2}", s.name(), rank(s, "midas"), rank(s, "rhs")))
            .collect::<Vec<_>>()
            .join(", ")
    );
    detail += &format!(
        "; regressor ({:.3}, {:.3}, {:.3})",
        model.skewness, model.portion, model.intercept
    );
    Outcome::check(out.failures.is_empty() && best_deg && not_worse, detail)
}

// ---------------------------------------------------------------------------
// 9. Real dataset summaries

fn find_dataset(dir: &Path, name: &str) -> Option<(PathBuf, Format)> {
    let plain = dir.join(format!("{name}.hyg"));
    if plain.exists() {
        return Some((plain, Format::Plain));
    }
    for prefix in [dir.join(name).join(name), dir.join(name)] {
        let nverts = PathBuf::from(format!("{}-nverts.txt", prefix.display()));
        if nverts.exists() {
            return Some((prefix, Format::Benson));
        }
    }
    None
}

fn criterion_9() -> Outcome {
    let Some(dir) = std::env::var_os("HYPERSAMPLE_DATA").map(PathBuf::from) else {
        return Outcome {
            status: Status::Skip,
            detail: "HYPERSAMPLE_DATA not set".into(),
        };
    };
    let mut notes = Vec::new();
    let mut ok = true;
    let mut found = 0;
    let exact = StatOptions {
        exact_threshold: usize::MAX,
        ..StatOptions::default()
    };
    if let Some((path, format)) = find_dataset(&dir, "email-Enron") {
        found += 1;
        let g = hio::load(&path, format).unwrap().graph;
        let r = StatReport::compute(&g, &exact).unwrap();
        let avg_degree = g.total_size() as f64 / g.num_nodes() as f64;
        let d = r.effective_diameter.unwrap_or(f64::NAN);
        let gcc = global_clustering_coefficient(&g, usize::MAX, 0, 0);
        let components = r.cc_portions.len();
        let pass = g.num_nodes() == 143
            && g.num_edges() == 1514
            && (r.density - 10.587).abs() <= 0.005
            && (avg_degree - 32.3).abs() <= 0.1
            && components == 1
            && (d - 2.38).abs() <= 0.1
            && (gcc - 0.66).abs() <= 0.02;
        ok &= pass;
        notes.push(format!(
            "email-Enron |V|={} |E|={} density {:.3} avg degree {avg_degree:.2} CCs {components} diameter {d:.3} GCC {gcc:.3}",
            g.num_nodes(),
            g.num_edges(),
            r.density
        ));
    }
    if let Some((path, format)) = find_dataset(&dir, "contact-primary-school") {
        found += 1;
        let g = hio::load(&path, format).unwrap().graph;
        let dens = density(&g);
        ok &= (dens - 52.50).abs() <= 0.005;
        notes.push(format!("contact-primary-school density {dens:.3}"));
    }
    if let Some((path, format)) = find_dataset(&dir, "NDC-classes") {
        found += 1;
        let g = hio::load(&path, format).unwrap().graph;
        let ccs = connected_component_portions(&g).len();
        ok &= ccs == 183;
        notes.push(format!("NDC-classes CCs {ccs}"));
    }
    if found == 0 {
        return Outcome {
            status: Status::Skip,
            detail: format!("no datasets under {}", dir.display()),
        };
    }
    Outcome::check(ok, notes.join("; "))
}

// ---------------------------------------------------------------------------
// 10. Determinism through the command line

fn cli(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_hypersample"))
        .args(args)
        .output()
        .expect("run binary");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn without_wall_time(bytes: &[u8]) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
    if let Some(info) = v.get_mut("info").and_then(|i| i.as_object_mut()) {
        info.remove("wall_time");
    }
    v
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let p = |name: &str| dir.path().join(name).display().to_string();
    let read = |name: &str| std::fs::read(dir.path().join(name)).unwrap();
    let mut differing = Vec::new();

    cli(&["gen-synthetic", "--preset", "small", "--seed", "3", "-o", &p("g1.hyg")]);
    cli(&["gen-synthetic", "--preset", "small", "--seed", "3", "-o", &p("g2.hyg")]);
    if read("g1.hyg") != read("g2.hyg") {
        differing.push("gen-synthetic".to_string());
    }
    let g = p("g1.hyg");

    for args in [
        vec!["stats", g.as_str(), "--seed", "7", "--exact-threshold", "10"],
        vec!["theory", g.as_str(), "--alpha-grid", "0,1,2"],
    ] {
        if cli(&args).stdout != cli(&args).stdout {
            differing.push(args[0].to_string());
        }
    }

    let methods = [
        "rns", "rdn", "rw", "ff", "rhs", "tihs", "mgs-deg-add", "mgs-avg-rep", "mgs-deg-del", "midas", "midas-basic@1",
        "midas-max", "midas-avg", "midas-ns",
    ];
    for m in methods {
        for run in ["a", "b"] {
            let out = p(&format!("{m}-{run}.hyg"));
            cli(&["sample", &g, "--method", m, "--portion", "0.2", "--seed", "11", "-o", &out]);
        }
        let same_sample = read(&format!("{m}-a.hyg")) == read(&format!("{m}-b.hyg"));
        let same_sidecar =
            without_wall_time(&read(&format!("{m}-a.json"))) == without_wall_time(&read(&format!("{m}-b.json")));
        if !(same_sample && same_sidecar) {
            differing.push(format!("sample {m}"));
        }
    }
    let e1 = cli(&["evaluate", &g, &p("midas-a.hyg"), "--seed", "2"]).stdout;
    let e2 = cli(&["evaluate", &g, &p("midas-a.hyg"), "--seed", "2"]).stdout;
    if e1 != e2 {
        differing.push("evaluate".into());
    }

    cli(&["gen-synthetic", "--preset", "small", "--seed", "4", "--preference", "0.7", "-o", &p("h.hyg")]);
    let plan = format!(
        "datasets = {g}, h.hyg\nmethods = rhs, rns, midas\nportions = 0.2, 0.3, 0.4\ntrials = 2\nseed = 4\nalpha_search = true\nsv_rank_cap = 30\n"
    );
    std::fs::write(dir.path().join("plan.txt"), plan).unwrap();
    let summary1 = cli(&["benchmark", &p("plan.txt"), "--output", &p("b1"), "--parallelism", "1"]).stdout;
    let summary2 = cli(&["benchmark", &p("plan.txt"), "--output", &p("b2"), "--parallelism", "3"]).stdout;
    if summary1 != summary2 {
        differing.push("benchmark stdout".into());
    }
    for f in ["results.csv", "cells.csv", "summary.json", "alpha_search.csv"] {
        if read(&format!("b1/{f}")) != read(&format!("b2/{f}")) {
            differing.push(format!("benchmark {f}"));
        }
    }
    let f1 = cli(&["fit-regressor", &p("b1/alpha_search.csv")]).stdout;
    let f2 = cli(&["fit-regressor", &p("b2/alpha_search.csv")]).stdout;
    let fit_note = if f1 == f2 { "" } else { " fit-regressor differs" };
    if f1 != f2 {
        differing.push("fit-regressor".into());
    }
    Outcome::check(
        differing.is_empty(),
        format!(
            "{} sampler runs, 7 commands, benchmark at parallelism 1 vs 3; differing: {}{fit_note}",
            2 * methods.len(),
            if differing.is_empty() { "none".into() } else { differing.join(", ") }
        ),
    )
}

// ---------------------------------------------------------------------------

type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("C1", "statistics match brute-force oracles", Duration::from_secs(60), criterion_1),
        ("C2", "D-statistic matches a cumulative-scan oracle", Duration::from_secs(5), criterion_2),
        ("C3", "weighted index draw distribution", Duration::from_secs(30), criterion_3),
        ("C4", "exponent 0 is uniform hyperedge sampling", Duration::from_secs(10), criterion_4),
        ("C5", "sampled degree increases with the exponent", Duration::from_secs(120), criterion_5),
        ("C6", "bias monotonicity and downward closure", Duration::from_secs(60), criterion_6),
        ("C7", "hill climbing near the grid optimum", Duration::from_secs(120), criterion_7),
        ("C8", "desk-scale method ordering", Duration::from_secs(600), criterion_8),
        ("C9", "real dataset summaries", Duration::MAX, criterion_9),
        ("C10", "determinism of every command", Duration::MAX, criterion_10),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, title, budget, run) in criteria {
        if !filters.is_empty() && !filters.iter().any(|f| f == id) {
            continue;
        }
        ran += 1;
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > budget;
        let label = match (&outcome.status, over) {
            (Status::Skip, _) => "SKIP",
            (Status::Pass, false) => "PASS",
            _ => {
                failed += 1;
                "FAIL"
            }
        };
        let budget_note = if budget == Duration::MAX {
            String::new()
        } else {
            format!(" / {}s", budget.as_secs())
        };
        println!(
            "{id:<4}{label}  {title} [{:.1}s{budget_note}]: {}",
            elapsed.as_secs_f64(),
            outcome.detail
        );
    }
    println!("acceptance: {ran} run, {failed} failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
