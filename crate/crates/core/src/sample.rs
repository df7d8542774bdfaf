//! Approximately uniform edge sampling by Count-guided rejection down a
//! chain of halving vertex subsets.

use rand::Rng;

use crate::count::count;
use crate::error::{invalid, Error, Result};
use crate::numeric::exact_log2;
use crate::oracle::{enumerate_edges_within, pad_to_power_of_two, IndependenceOracle, RunStats, View};
use crate::profile::ConstantsProfile;
use crate::random::random_fixed_subset;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleParams {
    pub levels: i64,
    pub xi: f64,
    pub delta: f64,
    /// Maximum rejection-loop iterations at one level.
    pub accept_cap: u64,
}

impl SampleParams {
    pub fn new(n: usize, k: usize, epsilon: f64, profile: &ConstantsProfile) -> Result<Self> {
        let log_n = exact_log2(n).ok_or_else(|| invalid(format!("{n} is not a power of two")))?;
        let levels = log_n as i64 - (8.0 * (k * k) as f64).log2().ceil() as i64;
        let xi = epsilon / (100.0 * log_n.max(1) as f64);
        let nk = (n as f64).powi(k as i32);
        let delta = xi / (2f64.powi(k as i32 + 8) * nk * nk);
        let cap_formula = 2f64.powi(k as i32 + 2) * (8.0 * levels.max(1) as f64 * nk / epsilon).ln();
        Ok(SampleParams {
            levels,
            xi,
            delta,
            accept_cap: profile.accept_cap.apply(cap_formula),
        })
    }
}

fn uniform_edge<O, R>(oracle: &O, subset: &[usize], rng: &mut R, stats: &mut RunStats) -> Result<Option<Vec<usize>>>
where
    O: IndependenceOracle + ?Sized,
    R: Rng + ?Sized,
{
    let edges = enumerate_edges_within(oracle, subset, stats)?;
    if edges.is_empty() {
        return Ok(None);
    }
    let pick = rng.random_range(0..edges.len());
    Ok(Some(edges[pick].clone()))
}

/// One sampler run on a power-of-two view; `None` is FAIL.
///
/// Tiny or high-precision inputs are handled by enumerating every edge.
/// Otherwise the vertex set is halved `levels - 1` times; a candidate half
/// `X` of the current set is accepted with probability
/// `min(1, Count(G[X]) / Count(current))` and resampled on rejection. The
/// final set is small enough to enumerate.
pub fn helper_sample<R: Rng + ?Sized>(
    view: &View<'_>,
    epsilon: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<Option<Vec<usize>>> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1/2)")));
    }
    let n = view.vertex_count();
    let k = view.arity();
    let all: Vec<usize> = (0..n).collect();
    if epsilon <= (n as f64).powi(-(k as i32)) {
        return uniform_edge(view, &all, rng, stats);
    }
    let params = SampleParams::new(n, k, epsilon, profile)?;
    if params.levels <= 1 {
        return uniform_edge(view, &all, rng, stats);
    }

    let mut current = all;
    let mut current_count = count(view, params.xi, params.delta, rng, profile, stats)?;
    for _level in 2..=params.levels {
        if current_count <= 0.0 {
            return Ok(None);
        }
        let half = current.len() / 2;
        let mut accepted = None;
        for _ in 0..params.accept_cap {
            let candidate = random_fixed_subset(rng, &current, half)?;
            let estimate = count(&view.restrict(&candidate)?, params.xi, params.delta, rng, profile, stats)?;
            let keep = (estimate / current_count).min(1.0);
            if rng.random::<f64>() < keep {
                accepted = Some((candidate, estimate));
                break;
            }
            stats.rejections += 1;
        }
        match accepted {
            Some((set, estimate)) => {
                current = set;
                current_count = estimate;
            }
            None => return Ok(None),
        }
    }
    uniform_edge(view, &current, rng, stats)
}

/// Query budget for one [`sample`] call.
pub fn sample_query_cap(n: usize, k: usize, epsilon: f64, profile: &ConstantsProfile) -> u64 {
    let log_n = (n.max(2) as f64).log2();
    let kf = k as f64;
    let cap = profile.resource_cap_factor
        * epsilon.powi(-2)
        * kf.powf(7.0 * kf)
        * log_n.powf(4.0 * kf + 11.0);
    if cap >= u64::MAX as f64 {
        u64::MAX
    } else {
        cap.ceil() as u64
    }
}

/// An ε-approximately uniform edge, or `None` (FAIL).
///
/// Pads to a power of two and runs [`helper_sample`] at `epsilon / 3` under
/// a query budget; exhausting the budget is a FAIL.
pub fn sample<O, R>(
    oracle: &O,
    epsilon: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<Option<Vec<usize>>>
where
    O: IndependenceOracle,
    R: Rng + ?Sized,
{
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    let view = pad_to_power_of_two(oracle);
    let cap = sample_query_cap(view.vertex_count(), view.arity(), epsilon, profile);
    let mut run_stats = RunStats::with_limit(stats.remaining().map_or(cap, |r| r.min(cap)));
    let result = helper_sample(&view, epsilon / 3.0, rng, profile, &mut run_stats);
    stats.absorb(&run_stats);
    match result {
        Ok(edge) => Ok(edge.map(|e| view.to_base(&e))),
        Err(Error::BudgetExhausted { .. }) => {
            stats.budget_overruns += 1;
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
