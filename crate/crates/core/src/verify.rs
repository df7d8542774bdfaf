//! Ground truth and statistical harnesses for the randomized estimators.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hypergraph::Hypergraph;
use crate::oracle::RunStats;
use crate::random::{stream, StreamRng};

/// Edge count by direct enumeration of the edge list.
pub fn exact_count(g: &Hypergraph) -> u64 {
    g.edge_count() as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trials: u64,
    pub successes: u64,
    pub rate: f64,
    /// Wilson score interval at 95%.
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub mean_queries: f64,
}

/// 95% Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = successes as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

/// Runs `trials` independent trials; trial `i` gets `stream(master_seed, i)`.
///
/// With `threads > 1` the trials run on a dedicated rayon pool; results are
/// gathered in trial order, so the report does not depend on scheduling.
pub fn success_rate_trial<F>(master_seed: u64, trials: u64, threads: usize, runner: F) -> Result<TrialReport>
where
    F: Fn(&mut StreamRng) -> Result<(bool, RunStats)> + Sync,
{
    if trials == 0 {
        return Err(invalid("at least one trial is required"));
    }
    let run = |i: u64| {
        let mut rng = stream(master_seed, i);
        runner(&mut rng)
    };
    let outcomes: Vec<Result<(bool, RunStats)>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| invalid(format!("thread pool: {e}")))?;
        pool.install(|| (0..trials).into_par_iter().map(run).collect())
    } else {
        (0..trials).map(run).collect()
    };
    let mut successes = 0u64;
    let mut queries = 0u64;
    for outcome in outcomes {
        let (ok, stats) = outcome?;
        successes += ok as u64;
        queries += stats.oracle_queries;
    }
    let (wilson_low, wilson_high) = wilson_interval(successes, trials);
    Ok(TrialReport {
        trials,
        successes,
        rate: successes as f64 / trials as f64,
        wilson_low,
        wilson_high,
        mean_queries: queries as f64 / trials as f64,
    })
}

/// Total-variation distance between the empirical distribution of
/// `samples` and the uniform distribution on `edges`.
///
/// A sample that is not in `edges` is an error: the sampler returned a
/// non-edge.
pub fn tv_distance(samples: &[Vec<usize>], edges: &[Vec<usize>]) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("no samples"));
    }
    let canonical = |e: &Vec<usize>| {
        let mut c = e.clone();
        c.sort_unstable();
        c
    };
    let mut freq: HashMap<Vec<usize>, u64> = edges.iter().map(|e| (canonical(e), 0)).collect();
    for s in samples {
        match freq.get_mut(&canonical(s)) {
            Some(c) => *c += 1,
            None => return Err(invalid(format!("sample {s:?} is not an edge"))),
        }
    }
    let total = samples.len() as f64;
    let uniform = 1.0 / freq.len() as f64;
    Ok(0.5 * freq.values().map(|&c| (c as f64 / total - uniform).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn exact_count_examples() {
        assert_eq!(exact_count(&Hypergraph::empty(5, 2).unwrap()), 0);
        assert_eq!(exact_count(&Hypergraph::complete(8, 2).unwrap()), 28);
    }

    #[test]
    fn constant_runners() {
        let pass = success_rate_trial(1, 100, 1, |_| Ok((true, RunStats::new()))).unwrap();
        assert_eq!(pass.rate, 1.0);
        assert_eq!(pass.successes, 100);
        assert!(pass.wilson_low <= 1.0 && pass.wilson_high == 1.0);
        let fail = success_rate_trial(1, 100, 1, |_| Ok((false, RunStats::new()))).unwrap();
        assert_eq!(fail.rate, 0.0);
        assert!(success_rate_trial(1, 0, 1, |_| Ok((true, RunStats::new()))).is_err());
    }

    #[test]
    fn fair_coin_interval_covers_half() {
        let r = success_rate_trial(7, 10_000, 1, |rng| Ok((rng.random::<bool>(), RunStats::new()))).unwrap();
        assert!(r.wilson_low <= 0.5 && 0.5 <= r.wilson_high, "{r:?}");
        assert!(r.wilson_low <= r.rate && r.rate <= r.wilson_high);
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let runner = |rng: &mut StreamRng| {
            let mut st = RunStats::new();
            st.oracle_queries = rng.random_range(0..100);
            Ok((rng.random::<f64>() < 0.3, st))
        };
        let a = success_rate_trial(11, 500, 1, runner).unwrap();
        let b = success_rate_trial(11, 500, 4, runner).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn tv_examples() {
        let edges = vec![vec![0, 1], vec![1, 2]];
        assert_eq!(tv_distance(&[vec![0, 1], vec![2, 1]], &edges).unwrap(), 0.0);
        assert_eq!(tv_distance(&[vec![0, 1], vec![0, 1]], &edges).unwrap(), 0.5);
        assert!(tv_distance(&[vec![0, 2]], &edges).is_err());
        assert!(tv_distance(&[], &edges).is_err());
    }

    #[test]
    fn tv_of_true_uniform_draws_is_small() {
        let edges: Vec<Vec<usize>> = (0..20).map(|i| vec![i, i + 20]).collect();
        let mut rng = crate::random::seeded(3);
        let samples: Vec<Vec<usize>> = (0..10_000).map(|_| edges[rng.random_range(0..20)].clone()).collect();
        assert!(tv_distance(&samples, &edges).unwrap() <= 0.06);
    }
}
