use rand::Rng;

use witcount::count::count;
use witcount::oracle::enumerate_edges_within;
use witcount::problems::{
    count_colourful_h, exact_weight_clique_oracle, kov_oracle, ksum_oracle, majority_vote_oracle, CliqueBruteForce,
    KSumInstance, KovInstance, OvBruteForce, PatternInstance, SimpleGraph, SumBruteForce, SumMeetInMiddle,
    WeightedGraph,
};
use witcount::random::seeded;
use witcount::{ColourClasses, ConstantsProfile, IndependenceOracle, RunStats};

fn edges_of<O: IndependenceOracle>(o: &O) -> Vec<Vec<usize>> {
    let all: Vec<usize> = (0..o.vertex_count()).collect();
    enumerate_edges_within(o, &all, &mut RunStats::new()).unwrap()
}

#[test]
fn ksum_deciders_give_the_same_hypergraph() {
    let mut rng = seeded(1);
    for k in 3..=5 {
        for _ in 0..10 {
            let mut values: Vec<i64> = (0..11).map(|_| rng.random_range(-30..=30)).collect();
            values.sort_unstable();
            values.dedup();
            if values.len() < k {
                continue;
            }
            let inst = KSumInstance::new(k, values).unwrap();
            let fast = edges_of(&ksum_oracle(inst.clone(), SumMeetInMiddle).unwrap());
            let slow = edges_of(&ksum_oracle(inst.clone(), SumBruteForce).unwrap());
            assert_eq!(fast, slow);
            assert_eq!(fast, inst.witnesses());
        }
    }
}

#[test]
fn ksum_classes_must_each_be_used() {
    // 1 + 2 + (-3) = 0, but a query with only two non-empty classes has no
    // colourful triple.
    let inst = KSumInstance::new(3, vec![1, 2, -3, 10]).unwrap();
    let o = ksum_oracle(inst, SumMeetInMiddle).unwrap();
    let q = ColourClasses::new(vec![vec![0, 1], vec![2], vec![]], 4).unwrap();
    assert!(!o.query(&q).unwrap().has_edge());
    let q = ColourClasses::new(vec![vec![1], vec![2, 3], vec![0]], 4).unwrap();
    assert!(o.query(&q).unwrap().has_edge());
}

#[test]
fn kov_mixed_classes_find_orthogonal_pairs() {
    let sets = vec![
        vec!["1100".to_string(), "1010".to_string()],
        vec!["0011".to_string(), "0110".to_string()],
    ];
    let inst = KovInstance::new(4, sets).unwrap();
    let o = kov_oracle(inst.clone(), OvBruteForce);
    assert_eq!(edges_of(&o), vec![vec![inst.vertex(0, 0), inst.vertex(1, 0)]]);
    // Class 0 holds a list-1 vector and class 1 a list-0 vector.
    let q = ColourClasses::new(vec![vec![inst.vertex(1, 0)], vec![inst.vertex(0, 0)]], 4).unwrap();
    assert!(o.query(&q).unwrap().has_edge());
    // Two vectors from the same list never form a witness.
    let q = ColourClasses::new(vec![vec![inst.vertex(0, 0)], vec![inst.vertex(0, 1)]], 4).unwrap();
    assert!(!o.query(&q).unwrap().has_edge());
}

#[test]
fn clique_count_matches_enumeration() {
    let mut rng = seeded(3);
    for _ in 0..10 {
        let n = 8;
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(0.8) {
                    edges.push((u, v, rng.random_range(-2..=2)));
                }
            }
        }
        let g = WeightedGraph::new(n, edges, None).unwrap();
        let truth = g.zero_weight_cliques(4);
        let o = exact_weight_clique_oracle(g, 4, CliqueBruteForce).unwrap();
        assert_eq!(edges_of(&o), truth);
        let est = count(&o, 0.3, 0.2, &mut rng, &ConstantsProfile::light(), &mut RunStats::new()).unwrap();
        assert_eq!(est, truth.len() as f64);
    }
}

#[test]
fn majority_vote_over_adapter_is_transparent() {
    let inst = KSumInstance::new(3, vec![-5, -2, 1, 3, 4, 7]).unwrap();
    let plain = ksum_oracle(inst.clone(), SumMeetInMiddle).unwrap();
    let voted = majority_vote_oracle(ksum_oracle(inst, SumMeetInMiddle).unwrap(), 5).unwrap();
    assert_eq!(edges_of(&plain), edges_of(&voted));
    let mut st = RunStats::new();
    let q = ColourClasses::singletons(&[0, 2, 4]);
    st.ask(&voted, &q).unwrap();
    assert_eq!((st.oracle_queries, st.decider_calls), (1, 5));
}

#[test]
fn colourful_four_cycle_count() {
    let cycle = SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
    // K4 with colours 0..3 hosts three distinct 4-cycles.
    let mut host_edges = Vec::new();
    for u in 0..4 {
        for v in u + 1..4 {
            host_edges.push((u, v));
        }
    }
    let host = SimpleGraph::new(4, host_edges).unwrap();
    let inst = PatternInstance::new(cycle, host, vec![0, 1, 2, 3]).unwrap();
    assert_eq!(inst.colourful_copy_count().unwrap(), 3);
    let est = count_colourful_h(&inst, 0.3, 0.2, &mut seeded(4), &ConstantsProfile::light(), &mut RunStats::new()).unwrap();
    assert_eq!(est, 3.0);
}

#[test]
fn colourful_copies_need_distinct_colours() {
    let path = SimpleGraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
    let host = SimpleGraph::new(4, vec![(0, 1), (1, 2), (2, 3)]).unwrap();
    let inst = PatternInstance::new(path, host, vec![0, 1, 0, 2]).unwrap();
    // 0-1-2 repeats colour 0; only 1-2-3 is colourful.
    assert_eq!(inst.colourful_copy_count().unwrap(), 1);
    let est = count_colourful_h(&inst, 0.3, 0.2, &mut seeded(5), &ConstantsProfile::light(), &mut RunStats::new()).unwrap();
    assert_eq!(est, 1.0);
}
