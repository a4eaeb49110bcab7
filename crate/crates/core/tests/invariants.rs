use std::collections::{BTreeMap, BTreeSet, HashMap};

use hypersample::eval::{CellKey, DistanceVector, EvalMatrix, Statistic};
use hypersample::hypergraph::io::{self, Format};
use hypersample::hypergraph::InducedTracker;
use hypersample::midas::{hyperedge_weights, WeightMode, WeightedIndex};
use hypersample::samplers::{sample, target_size, Method, SampleSpec};
use hypersample::stats::{d_statistic, density, overlapness, Distribution};
use hypersample::theory::{h_monotone_where_condition_holds, BiasModel};
use hypersample::{Hypergraph, NodeId, SubHypergraph};
use proptest::prelude::*;

fn edges_strategy(max_label: u64, max_edges: usize, max_size: usize) -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::btree_set(0..max_label, 1..=max_size), 1..=max_edges)
        .prop_map(|es| es.into_iter().map(|s| s.into_iter().collect()).collect())
}

fn build(edges: Vec<Vec<u64>>) -> Hypergraph {
    Hypergraph::from_labeled_edges(edges).unwrap().0
}

fn edge_set(h: &Hypergraph) -> BTreeSet<Vec<u64>> {
    io::canonical_edges(h).into_iter().collect()
}

fn label_degrees(h: &Hypergraph) -> HashMap<u64, usize> {
    (0..h.num_nodes() as NodeId).map(|v| (h.label(v), h.degree(v))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plain_and_benson_round_trip(edges in edges_strategy(30, 25, 6)) {
        let g = build(edges);
        let dir = tempfile::tempdir().unwrap();
        let plain = dir.path().join("g.hyg");
        io::save_plain(&g, &plain).unwrap();
        prop_assert_eq!(edge_set(&io::load(&plain, Format::Plain).unwrap().graph), edge_set(&g));
        let prefix = dir.path().join("g");
        io::save_benson(&g, &prefix).unwrap();
        prop_assert_eq!(edge_set(&io::load(&prefix, Format::Benson).unwrap().graph), edge_set(&g));
    }

    #[test]
    fn sub_hypergraph_degrees_never_grow(edges in edges_strategy(30, 30, 5), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..30)) {
        let g = build(edges);
        let full = label_degrees(&g);
        let mut ids: Vec<u32> = picks.iter().map(|i| i.index(g.num_edges()) as u32).collect();
        ids.sort_unstable();
        ids.dedup();
        let by_edges = SubHypergraph::from_hyperedges(&g, &ids).unwrap().to_hypergraph();
        let nodes: Vec<NodeId> = picks.iter().map(|i| i.index(g.num_nodes()) as NodeId).collect();
        let by_nodes = SubHypergraph::induced_by_nodes(&g, &nodes).unwrap().to_hypergraph();
        for s in [by_edges, by_nodes] {
            for (label, d) in label_degrees(&s) {
                prop_assert!(d <= full[&label]);
            }
        }
    }

    #[test]
    fn tracker_matches_induced_at_every_prefix(edges in edges_strategy(20, 25, 4), order in any::<u64>()) {
        let g = build(edges);
        let mut nodes: Vec<NodeId> = (0..g.num_nodes() as NodeId).collect();
        let mut state = order;
        for i in (1..nodes.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            nodes.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut tracker = InducedTracker::new(&g);
        for n in 1..=nodes.len() {
            tracker.add_node(nodes[n - 1]).unwrap();
            let mut got: Vec<u32> = (0..g.num_edges() as u32).filter(|&e| tracker.is_induced(e)).collect();
            got.sort_unstable();
            let mut want = SubHypergraph::induced_by_nodes(&g, &nodes[..n]).unwrap().edge_ids().to_vec();
            want.sort_unstable();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn distributions_are_normalised(values in prop::collection::vec(0u64..50, 1..200)) {
        let d = Distribution::from_values(values);
        let total: f64 = d.mass().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let c = d.cumulative();
        prop_assert!(c.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((c[c.len() - 1] - 1.0).abs() < 1e-9);
        prop_assert!(d.support().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn overlapness_dominates_density(edges in edges_strategy(25, 30, 5)) {
        let g = build(edges);
        let singletons = g.edges().all(|e| e.len() == 1);
        prop_assert!(overlapness(&g) >= density(&g) - 1e-12);
        prop_assert_eq!((overlapness(&g) - density(&g)).abs() < 1e-12, singletons);
    }

    #[test]
    fn d_statistic_is_a_bounded_symmetric_distance(a in prop::collection::vec(0u64..12, 1..60), b in prop::collection::vec(0u64..12, 1..60)) {
        let (da, db) = (Distribution::from_values(a.clone()), Distribution::from_values(b));
        let ab = d_statistic(&da, &db).unwrap();
        prop_assert_eq!(ab, d_statistic(&db, &da).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(d_statistic(&da, &da).unwrap(), 0.0);
        let mut doubled = a.clone();
        doubled.extend(a.iter().copied());
        prop_assert!(d_statistic(&da, &Distribution::from_values(doubled)).unwrap() < 1e-12);
        let same = da.support() == db.support()
            && da.mass().iter().zip(db.mass()).all(|(x, y)| (x - y).abs() < 1e-12);
        if !same {
            prop_assert!(ab > 0.0);
        }
    }

    #[test]
    fn aggregate_ranks_ignore_monotone_rescaling(raw in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 10), 6..=18)) {
        let methods = ["a", "b", "c"];
        let mut plain = EvalMatrix::new();
        let mut cubed = EvalMatrix::new();
        for (i, d) in raw.iter().enumerate() {
            let key = CellKey {
                method: methods[i % 3].into(),
                dataset: "d".into(),
                portion: [0.1, 0.2][(i / 3) % 2],
                trial: i / 6,
            };
            let mut distances = [0.0; 10];
            distances.copy_from_slice(d);
            let mut c = distances;
            c.iter_mut().for_each(|x| *x = x.powi(3));
            plain.insert(key.clone(), DistanceVector { distances, flags: [None; 10] });
            cubed.insert(key, DistanceVector { distances: c, flags: [None; 10] });
        }
        let (p, c) = (plain.aggregate(), cubed.aggregate());
        for st in Statistic::ALL {
            for m in methods {
                let (sp, sc) = (p.score(st, m), c.score(st, m));
                if let (Some(sp), Some(sc)) = (sp, sc) {
                    prop_assert!((sp.rank - sc.rank).abs() < 1e-12);
                }
            }
        }
        let mut z: BTreeMap<(u64, usize, &str), f64> = BTreeMap::new();
        for r in plain.scored_rows() {
            *z.entry((r.key.portion.to_bits(), r.key.trial, r.stat.name())).or_default() += r.zscore;
        }
        prop_assert!(z.values().all(|s| s.abs() < 1e-9));
    }

    #[test]
    fn fast_samplers_hit_the_target(edges in edges_strategy(40, 40, 5), portion in 0.05f64..0.95, seed in any::<u64>()) {
        let g = build(edges);
        let target = target_size(&g, portion);
        prop_assume!(target.is_ok());
        let target = target.unwrap();
        for name in ["rns", "rdn", "rw", "ff", "rhs", "tihs", "midas-basic@1", "midas-ns@1"] {
            let spec = SampleSpec { method: name.parse::<Method>().unwrap(), portion, seed };
            let s = sample(&g, &spec).unwrap();
            prop_assert_eq!(s.sub.num_edges(), target, "{}", name);
            let ids: BTreeSet<u32> = s.sub.edge_ids().iter().copied().collect();
            prop_assert_eq!(ids.len(), target);
        }
    }

    #[test]
    fn regular_hypergraphs_do_not_depend_on_mode(n in 4usize..20, size in 2usize..4, alpha in 0.0f64..4.0) {
        // cyclic windows: every node lies in exactly `size` hyperedges
        let edges: Vec<Vec<u64>> = (0..n).map(|i| (0..size).map(|j| ((i + j) % n) as u64).collect()).collect();
        let g = build(edges);
        prop_assume!(g.num_edges() == n);
        let probs = |mode| {
            let idx = WeightedIndex::new(&hyperedge_weights(&g, mode), alpha).unwrap();
            (0..n as u32).map(|e| idx.probability(e)).collect::<Vec<_>>()
        };
        let base = probs(WeightMode::Min);
        for mode in [WeightMode::Max, WeightMode::Avg] {
            for (a, b) in base.iter().zip(probs(mode)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn low_degree_mass_shape(edges in edges_strategy(30, 40, 5), alpha in 0.0f64..3.0) {
        let g = build(edges);
        for mode in [WeightMode::Min, WeightMode::Max, WeightMode::Avg] {
            let model = BiasModel::new(&g, mode);
            let rows = model.profile(alpha).rows;
            prop_assert!(rows.windows(2).all(|w| w[0].l <= w[1].l + 1e-12));
            let last = rows.last().unwrap();
            prop_assert_eq!(last.k, g.max_degree() as u64);
            prop_assert!((last.l - 1.0).abs() < 1e-12);
            prop_assert!(rows.iter().all(|r| r.h == 1.0 - r.l));
            prop_assert!(h_monotone_where_condition_holds(&model, &[0.0, 0.5, 1.0, 2.0, 4.0], 1e-12));
        }
    }
}

const CSV_HEADER: &str = "method,dataset,portion,trial,stat,distance,rank,zscore";

#[test]
fn results_csv_is_self_auditing() {
    let mut m = EvalMatrix::new();
    let mut x = 0.37_f64;
    for trial in 0..3 {
        for portion in [0.1, 0.3] {
            for method in ["rhs", "midas", "ff", "rns"] {
                let mut distances = [0.0; 10];
                for d in &mut distances {
                    x = (x * 97.0 + 0.123).fract();
                    // coarse values so ties happen
                    *d = (x * 8.0).floor() / 8.0;
                }
                let key = CellKey { method: method.into(), dataset: "toy".into(), portion, trial };
                m.insert(key, DistanceVector { distances, flags: [None; 10] });
            }
        }
    }
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let mut groups: BTreeMap<(String, String, String, String), Vec<(f64, f64, f64)>> = BTreeMap::new();
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 8);
        let parse = |s: &str| s.parse::<f64>().unwrap();
        groups
            .entry((f[1].into(), f[2].into(), f[3].into(), f[4].into()))
            .or_default()
            .push((parse(f[5]), parse(f[6]), parse(f[7])));
    }
    assert_eq!(groups.len(), 2 * 3 * 10);
    for rows in groups.values() {
        let n = rows.len() as f64;
        let mean = rows.iter().map(|r| r.0).sum::<f64>() / n;
        let sd = (rows.iter().map(|r| (r.0 - mean).powi(2)).sum::<f64>() / n).sqrt();
        for &(d, rank, z) in rows {
            let below = rows.iter().filter(|r| r.0 < d).count() as f64;
            let equal = rows.iter().filter(|r| r.0 == d).count() as f64;
            assert_eq!(rank, below + (equal + 1.0) / 2.0);
            let want = if sd == 0.0 { 0.0 } else { (d - mean) / sd };
            assert!((z - want).abs() < 1e-9, "{z} vs {want}");
        }
    }
}
