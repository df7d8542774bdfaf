use proptest::prelude::*;

use witcount::count::{trim, trim_size_bound, WeightedEntry, WeightedList};
use witcount::oracle::{count_edges_within, enumerate_edges_within, exact_cind, pad_to_power_of_two};
use witcount::random::{bernoulli_subset, random_fixed_subset, random_partition, seeded};
use witcount::verify::wilson_interval;
use witcount::{ColourClasses, ConstantsProfile, Hypergraph, IndependenceOracle, RunStats, View};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// A hypergraph on `n <= 12` vertices with arity 2 or 3.
fn hypergraph() -> impl Strategy<Value = Hypergraph> {
    (2usize..=3)
        .prop_flat_map(|k| (Just(k), k..=12usize))
        .prop_flat_map(|(k, n)| {
            let all = subsets(n, k);
            let len = all.len();
            (Just((n, k, all)), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|((n, k, all), keep)| {
            let edges = all.into_iter().zip(keep).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            Hypergraph::new(n, k, edges).unwrap()
        })
}

/// Each vertex goes to one of `k` classes or to none (label `k`).
fn classes_for(g: &Hypergraph, labels: &[usize]) -> ColourClasses {
    let k = g.arity();
    let mut classes = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate().take(g.vertex_count()) {
        if l % (k + 1) < k {
            classes[l % (k + 1)].push(v);
        }
    }
    ColourClasses::new(classes, g.vertex_count()).unwrap()
}

fn naive_has_colourful_edge(g: &Hypergraph, classes: &ColourClasses) -> bool {
    g.edges().iter().any(|e| {
        let mut hit = vec![false; classes.len()];
        for &v in e {
            for (i, c) in classes.iter().enumerate() {
                if c.contains(&v) {
                    hit[i] = true;
                }
            }
        }
        hit.iter().all(|&h| h)
            && e.iter().all(|v| classes.iter().filter(|c| c.contains(v)).count() == 1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cind_matches_naive_scan(g in hypergraph(), labels in proptest::collection::vec(0usize..4, 12)) {
        let classes = classes_for(&g, &labels);
        let answer = exact_cind(&g, &classes, &mut RunStats::new()).unwrap();
        prop_assert_eq!(answer.has_edge(), naive_has_colourful_edge(&g, &classes));
    }

    #[test]
    fn enumeration_recovers_edges(g in hypergraph()) {
        let all: Vec<usize> = (0..g.vertex_count()).collect();
        let mut st = RunStats::new();
        let found = enumerate_edges_within(&g, &all, &mut st).unwrap();
        prop_assert_eq!(&found[..], g.edges());
        prop_assert_eq!(st.oracle_queries as usize, subsets(g.vertex_count(), g.arity()).len());
    }

    #[test]
    fn padding_adds_only_isolated_vertices(g in hypergraph(), labels in proptest::collection::vec(0usize..4, 16)) {
        let padded = pad_to_power_of_two(&g);
        let n = g.vertex_count();
        prop_assert!(padded.vertex_count().is_power_of_two());
        prop_assert!(padded.vertex_count() >= n && padded.vertex_count() < 2 * n.max(1));
        let all: Vec<usize> = (0..padded.vertex_count()).collect();
        let found = enumerate_edges_within(&padded, &all, &mut RunStats::new()).unwrap();
        prop_assert_eq!(&found[..], g.edges());

        let k = g.arity();
        let mut wide = vec![Vec::new(); k];
        let mut narrow = vec![Vec::new(); k];
        for (v, &l) in labels.iter().enumerate().take(padded.vertex_count()) {
            if l % (k + 1) < k {
                wide[l % (k + 1)].push(v);
                if v < n {
                    narrow[l % (k + 1)].push(v);
                }
            }
        }
        let wide = ColourClasses::new(wide, padded.vertex_count()).unwrap();
        let narrow = ColourClasses::new(narrow, n).unwrap();
        prop_assert_eq!(padded.query(&wide).unwrap(), g.query(&narrow).unwrap());
    }

    #[test]
    fn nested_restriction_matches_induced_subgraph(g in hypergraph(), seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let n = g.vertex_count();
        let all: Vec<usize> = (0..n).collect();
        let outer = random_fixed_subset(&mut rng, &all, n - n / 3).unwrap();
        let inner_local: Vec<usize> = (0..outer.len()).collect();
        let inner_local = random_fixed_subset(&mut rng, &inner_local, outer.len() / 2 + 1).unwrap();
        let view = View::whole(&g).restrict(&outer).unwrap().restrict(&inner_local).unwrap();
        let base: Vec<usize> = inner_local.iter().map(|&i| outer[i]).collect();
        prop_assert_eq!(view.to_base(&(0..base.len()).collect::<Vec<_>>()), base.clone());
        let mut st = RunStats::new();
        let via_view = count_edges_within(&view, &(0..base.len()).collect::<Vec<_>>(), &mut st).unwrap();
        prop_assert_eq!(via_view as usize, g.induced(&base).unwrap().edge_count());
    }

    #[test]
    fn trim_respects_size_bound(
        masses in proptest::collection::vec(1e-3f64..1e5, 1..3000),
        xi in 0.05f64..0.9,
        delta in 0.01f64..0.9,
        b in 1.0f64..16.0,
        seed in any::<u64>(),
    ) {
        let entries = masses
            .iter()
            .map(|&m| WeightedEntry { weight: 1.0, set: vec![0, 1], estimate: m })
            .collect();
        let list = WeightedList::new(1, entries).unwrap();
        for profile in [ConstantsProfile::paper(), ConstantsProfile::light()] {
            let mut st = RunStats::new();
            let out = trim(256, 2, b, list.clone(), xi, delta, &mut seeded(seed), &profile, &mut st).unwrap();
            prop_assert!(out.len() as f64 <= trim_size_bound(256, 2, b, xi, delta));
            prop_assert_eq!(st.oracle_queries, 0);
        }
    }

    #[test]
    fn short_lists_pass_through_trim(masses in proptest::collection::vec(1.0f64..1e3, 1..20), seed in any::<u64>()) {
        let entries: Vec<WeightedEntry> = masses
            .iter()
            .map(|&m| WeightedEntry { weight: 2.0, set: vec![0, 1], estimate: m / 2.0 })
            .collect();
        let list = WeightedList::new(1, entries).unwrap();
        let out = trim(64, 2, 2.0, list.clone(), 0.2, 0.1, &mut seeded(seed), &ConstantsProfile::paper(), &mut RunStats::new()).unwrap();
        let mut before: Vec<f64> = list.entries.iter().map(|e| e.mass()).collect();
        let mut after: Vec<f64> = out.entries.iter().map(|e| e.mass()).collect();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn random_subsets_are_well_formed(n in 1usize..200, j in 0u32..8, seed in any::<u64>()) {
        let set: Vec<usize> = (0..n).map(|v| 3 * v).collect();
        let mut rng = seeded(seed);
        let kept = bernoulli_subset(&mut rng, &set, j).unwrap();
        prop_assert!(kept.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(kept.iter().all(|v| v % 3 == 0 && *v < 3 * n));
        let m = n / 2;
        let fixed = random_fixed_subset(&mut rng, &set, m).unwrap();
        prop_assert_eq!(fixed.len(), m);
        prop_assert!(fixed.windows(2).all(|w| w[0] < w[1]));
        let k = 1 + (seed % 4) as usize;
        let parts = random_partition(&mut rng, n, k);
        prop_assert_eq!(parts.len(), k);
        let mut joined: Vec<usize> = parts.concat();
        joined.sort_unstable();
        prop_assert_eq!(joined, (0..n).collect::<Vec<_>>());
    }

    #[test]
    fn wilson_interval_brackets_rate(trials in 1u64..10_000, frac in 0.0f64..=1.0) {
        let successes = (trials as f64 * frac).floor() as u64;
        let (lo, hi) = wilson_interval(successes, trials);
        let rate = successes as f64 / trials as f64;
        prop_assert!(0.0 <= lo && lo <= rate && rate <= hi && hi <= 1.0);
    }
}
