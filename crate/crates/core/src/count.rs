//! ε-approximate edge counting from coloured oracle access.
//!
//! The estimator keeps a weighted list of vertex subsets whose weighted edge
//! total tracks `e(G)`. Each level replaces every subset by random halves
//! ([`halve`]), then shrinks the list by importance sampling within dyadic
//! weight buckets ([`trim`]). Once the subsets are tiny their edges are
//! counted exactly.

use rand::Rng;

use crate::coarse::coarse;
use crate::error::{invalid, Error, Result};
use crate::numeric::{exact_log2, halving_survival_p, median};
use crate::oracle::{count_edges_within, pad_to_power_of_two, IndependenceOracle, RunStats, View};
use crate::profile::ConstantsProfile;
use crate::random::{random_fixed_subset, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEntry {
    pub weight: f64,
    pub set: Vec<usize>,
    /// Coarse estimate of the edge count of the subgraph induced by `set`.
    pub estimate: f64,
}

impl WeightedEntry {
    pub fn mass(&self) -> f64 {
        self.weight * self.estimate
    }
}

/// Entries whose sets all have size `2^level`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedList {
    pub level: u32,
    pub entries: Vec<WeightedEntry>,
}

impl WeightedList {
    pub fn new(level: u32, entries: Vec<WeightedEntry>) -> Result<Self> {
        let size = 1usize << level;
        for (i, e) in entries.iter().enumerate() {
            if e.set.len() != size {
                return Err(invalid(format!(
                    "entry {i} has {} vertices, level {level} needs {size}",
                    e.set.len()
                )));
            }
            if e.weight.is_nan() || e.weight <= 0.0 || e.estimate.is_nan() || e.estimate < 0.0 {
                return Err(invalid(format!("entry {i} has a non-positive weight or negative estimate")));
            }
        }
        Ok(WeightedList { level, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum w * ehat`.
    pub fn mass(&self) -> f64 {
        self.entries.iter().map(WeightedEntry::mass).sum()
    }
}

/// Derived constants of the fine estimator for an `n`-vertex input.
#[derive(Debug, Clone, PartialEq)]
pub struct CountParams {
    pub levels: i64,
    pub b: f64,
    pub xi: f64,
    pub delta: f64,
}

impl CountParams {
    pub fn new(n: usize, k: usize, epsilon: f64) -> Result<Self> {
        let log_n = exact_log2(n).ok_or_else(|| invalid(format!("{n} is not a power of two")))?;
        let levels = log_n as i64 - (2.0 * (k * k) as f64).log2().ceil() as i64;
        let b = 2.0 * (4.0 * k as f64 * log_n as f64).powi(k as i32);
        let i = levels.max(1) as f64;
        Ok(CountParams {
            levels,
            b,
            xi: epsilon / (4.0 * i),
            delta: 1.0 / (3.0 * (2.0 * i + 1.0)),
        })
    }
}

/// Radius of the dyadic bucket range used by [`trim`].
pub fn bucket_radius(n: usize, k: usize, b: f64) -> i32 {
    (15.0 * k as f64 * (4.0 * n as f64 * b).log2()).floor() as i32 + 1
}

/// Deterministic upper bound on the length of a trimmed list.
pub fn trim_size_bound(n: usize, k: usize, b: f64, xi: f64, delta: f64) -> f64 {
    33.0 * k as f64 * (4.0 * n as f64 * b).log2() + 32.0 * b * b * (2.0 / delta).log2() / (xi * xi)
}

/// Dyadic bucket `i` with `2^(i-1) <= x < 2^i`.
fn bucket_of(x: f64) -> i32 {
    let mut i = x.log2().floor() as i32 + 1;
    while 2f64.powi(i - 1) > x {
        i -= 1;
    }
    while x >= 2f64.powi(i) {
        i += 1;
    }
    i
}

/// Importance-samples `list` down to a bounded length while keeping its
/// weighted edge total within `(1 ± xi)` with probability `1 - delta`.
///
/// Makes no oracle queries. Entries below the lowest bucket are dropped;
/// entries at or above the top bucket violate the input promise and are
/// clamped into it (counted in `stats.promise_violations`).
#[allow(clippy::too_many_arguments)]
pub fn trim<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    b: f64,
    list: WeightedList,
    xi: f64,
    delta: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<WeightedList> {
    let floor_xi = (n as f64).powi(-2 * k as i32);
    if !(xi >= floor_xi && xi < 1.0) {
        return Err(invalid(format!("xi = {xi} outside [n^-2k, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} outside (0, 1)")));
    }
    if b.is_nan() || b < 1.0 {
        return Err(invalid(format!("b = {b} below 1")));
    }
    let a = bucket_radius(n, k, b);
    let total = list.mass();
    let level = list.level;
    let width = (2 * a + 1) as usize;
    let mut buckets: Vec<Vec<WeightedEntry>> = vec![Vec::new(); width];
    for entry in list.entries {
        if entry.mass() < 2f64.powi(-a) {
            continue;
        }
        let mut i = bucket_of(entry.mass());
        if i > a {
            stats.promise_violations += 1;
            i = a;
        }
        buckets[(i + a) as usize].push(entry);
    }

    let log_term = (2.0 / delta).log2();
    let mut out = Vec::new();
    for (slot, bucket) in buckets.into_iter().enumerate() {
        if bucket.is_empty() {
            continue;
        }
        let i = slot as i32 - a;
        let formula = (16.0 * b * b * 2f64.powi(i) * bucket.len() as f64 * log_term / (xi * xi * total)).ceil();
        let t = profile.trim_samples.apply(formula);
        if bucket.len() as u64 <= t {
            out.extend(bucket);
        } else {
            let scale = bucket.len() as f64 / t as f64;
            for _ in 0..t {
                let pick = &bucket[rng.random_range(0..bucket.len())];
                out.push(WeightedEntry {
                    weight: pick.weight * scale,
                    set: pick.set.clone(),
                    estimate: pick.estimate,
                });
            }
        }
    }
    Ok(WeightedList { level, entries: out })
}

/// Replaces each entry's set by random half-size subsets, reweighted by the
/// edge survival probability, with fresh coarse estimates. Entries whose
/// estimate is 0 are dropped.
#[allow(clippy::too_many_arguments)]
pub fn halve<R: Rng + ?Sized>(
    view: &View<'_>,
    b: f64,
    list: &WeightedList,
    xi: f64,
    delta: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<WeightedList> {
    let n = view.vertex_count();
    let k = view.arity();
    let y = list.level;
    let log_n = exact_log2(n).ok_or_else(|| invalid(format!("{n} is not a power of two")))?;
    let b_min = 2.0 * (4.0 * k as f64 * log_n as f64).powi(k as i32);
    if b < b_min {
        return Err(invalid(format!("b = {b} below 2(4k log n)^k = {b_min}")));
    }
    if y == 0 || (1u64 << (y - 1)) < 2 * (k * k) as u64 {
        return Err(invalid(format!("level {y} too small: need 2^(y-1) >= 2k^2")));
    }
    if !(xi > 0.0 && xi < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(invalid("xi and delta must lie in (0, 1)"));
    }
    if list.is_empty() {
        return Ok(WeightedList {
            level: y - 1,
            entries: Vec::new(),
        });
    }
    let p = halving_survival_p(y, k)?.value;
    let total = list.mass();
    let log_term = (4.0 / delta).log2();
    let counts: Vec<u64> = list
        .entries
        .iter()
        .map(|e| {
            let formula = (4.0 * b * b * e.mass() * log_term / (p * xi * xi * total)).ceil();
            profile.halve_samples.apply(formula)
        })
        .collect();
    let draws: u64 = counts.iter().sum();
    let inner_delta = delta / (2.0 * draws as f64);
    let half = 1usize << (y - 1);

    let mut out = Vec::with_capacity(draws as usize);
    for (entry, &t) in list.entries.iter().zip(&counts) {
        let weight = entry.weight / (p * t as f64);
        for _ in 0..t {
            let set = random_fixed_subset(rng, &entry.set, half)?;
            let estimate = coarse(&view.restrict(&set)?, inner_delta, rng, profile, stats)?;
            if estimate > 0.0 {
                out.push(WeightedEntry { weight, set, estimate });
            }
        }
    }
    Ok(WeightedList {
        level: y - 1,
        entries: out,
    })
}

/// One run of the fine estimator; correct to `(1 ± epsilon)` with
/// probability 2/3 under the paper profile.
///
/// Inputs with at most `profile.exact_threshold` vertices, or with
/// `epsilon < n^-k`, are counted exactly by enumeration.
pub fn helper_count<R: Rng + ?Sized>(
    view: &View<'_>,
    epsilon: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1/2)")));
    }
    let n = view.vertex_count();
    let k = view.arity();
    let log_n = exact_log2(n).ok_or_else(|| invalid(format!("{n} is not a power of two")))?;
    let all: Vec<usize> = (0..n).collect();
    if epsilon < (n as f64).powi(-(k as i32)) || n <= profile.exact_threshold {
        return Ok(count_edges_within(view, &all, stats)? as f64);
    }
    let params = CountParams::new(n, k, epsilon)?;
    if params.levels < 1 {
        return Ok(count_edges_within(view, &all, stats)? as f64);
    }
    let seed_estimate = coarse(view, params.delta, rng, profile, stats)?;
    if seed_estimate == 0.0 {
        return Ok(0.0);
    }
    let mut list = WeightedList {
        level: log_n,
        entries: vec![WeightedEntry {
            weight: 1.0,
            set: all,
            estimate: seed_estimate,
        }],
    };
    for _ in 0..params.levels {
        list = halve(view, params.b, &list, params.xi, params.delta, rng, profile, stats)?;
        list = trim(n, k, params.b, list, params.xi, params.delta, rng, profile, stats)?;
    }
    let mut total = 0.0;
    for entry in &list.entries {
        total += entry.weight * count_edges_within(view, &entry.set, stats)? as f64;
    }
    Ok(total)
}

/// Query budget for one [`helper_count`] run.
pub fn count_query_cap(n: usize, k: usize, epsilon: f64, profile: &ConstantsProfile) -> u64 {
    let log_n = (n.max(2) as f64).log2();
    let kf = k as f64;
    let cap = profile.resource_cap_factor
        * epsilon.powi(-2)
        * kf.powf(6.0 * kf)
        * log_n.powf(4.0 * kf + 7.0);
    if cap >= u64::MAX as f64 {
        u64::MAX
    } else {
        cap.ceil() as u64
    }
}

/// Number of [`helper_count`] repetitions in [`count`].
pub fn count_rounds(delta: f64, profile: &ConstantsProfile) -> u64 {
    profile
        .count_rounds
        .apply(36.0 * (2.0 / delta).ln().ceil())
}

/// ε-approximation of the number of edges, correct with probability
/// `1 - delta` under the paper profile.
///
/// Pads to a power of two, then takes the median of independent
/// [`helper_count`] runs. A run that exceeds its query budget contributes
/// −1 to the median.
pub fn count<O, R>(
    oracle: &O,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<f64>
where
    O: IndependenceOracle,
    R: Rng + ?Sized,
{
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid(format!("epsilon = {epsilon} outside (0, 1)")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} outside (0, 1)")));
    }
    let view = pad_to_power_of_two(oracle);
    let inner_eps = epsilon.min(1.0 / 3.0);
    let rounds = count_rounds(delta, profile);
    let cap = count_query_cap(view.vertex_count(), view.arity(), inner_eps, profile);
    let key: u64 = rng.random();
    let mut outputs = Vec::with_capacity(rounds as usize);
    for round in 0..rounds {
        let mut run_rng = stream(key, round);
        // An enclosing budget (e.g. the sampler's) bounds each run too.
        let limit = stats.remaining().map_or(cap, |r| r.min(cap));
        let mut run_stats = RunStats::with_limit(limit);
        let result = helper_count(&view, inner_eps, &mut run_rng, profile, &mut run_stats);
        stats.absorb(&run_stats);
        match result {
            Ok(x) => outputs.push(x),
            Err(Error::BudgetExhausted { .. }) if limit == cap && stats.remaining() != Some(0) => {
                stats.budget_overruns += 1;
                outputs.push(-1.0);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(median(&mut outputs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::random::seeded;

    #[test]
    fn bucket_boundaries() {
        assert_eq!(bucket_of(1.0), 1);
        assert_eq!(bucket_of(1.999), 1);
        assert_eq!(bucket_of(2.0), 2);
        assert_eq!(bucket_of(0.5), 0);
        assert_eq!(bucket_of(0.75), 0);
        assert_eq!(bucket_of(0.25), -1);
    }

    #[test]
    fn params_formulas() {
        let p = CountParams::new(1024, 2, 0.3).unwrap();
        assert_eq!(p.levels, 10 - 3);
        assert_eq!(p.b, 2.0 * 80f64.powi(2));
        assert!((p.xi - 0.3 / 28.0).abs() < 1e-15);
        assert!((p.delta - 1.0 / 45.0).abs() < 1e-15);
        assert_eq!(bucket_radius(1024, 2, p.b), (30.0 * (4096.0 * p.b).log2()).floor() as i32 + 1);
    }

    fn entry(w: f64, set: Vec<usize>, e: f64) -> WeightedEntry {
        WeightedEntry {
            weight: w,
            set,
            estimate: e,
        }
    }

    #[test]
    fn trim_single_entry_is_identity() {
        let list = WeightedList::new(1, vec![entry(3.0, vec![0, 1], 2.0)]).unwrap();
        let mut st = RunStats::new();
        let out = trim(16, 2, 2.0, list.clone(), 0.2, 0.1, &mut seeded(0), &ConstantsProfile::light(), &mut st).unwrap();
        assert_eq!(out, list);
        assert_eq!(st, RunStats::new());
    }

    #[test]
    fn trim_rejects_bad_xi() {
        let list = WeightedList::new(1, vec![entry(1.0, vec![0, 1], 1.0)]).unwrap();
        let p = ConstantsProfile::paper();
        let mut st = RunStats::new();
        assert!(trim(4, 2, 2.0, list.clone(), 1.0, 0.1, &mut seeded(0), &p, &mut st).is_err());
        assert!(trim(4, 2, 2.0, list, 1e-4, 0.1, &mut seeded(0), &p, &mut st).is_err());
    }

    #[test]
    fn trim_clamps_oversized_mass() {
        let b = 2.0;
        let a = bucket_radius(16, 2, b);
        let big = 2f64.powi(a + 3);
        let list = WeightedList::new(1, vec![entry(big, vec![0, 1], 1.0), entry(1.0, vec![2, 3], 1.0)]).unwrap();
        let mut st = RunStats::new();
        let out = trim(16, 2, b, list, 0.2, 0.1, &mut seeded(1), &ConstantsProfile::paper(), &mut st).unwrap();
        assert_eq!(st.promise_violations, 1);
        assert!(out.entries.iter().any(|e| e.weight == big));
    }

    #[test]
    fn halve_empty_and_level() {
        let g = Hypergraph::complete(16, 2).unwrap();
        let view = View::whole(&g);
        let b = 2.0 * 32f64.powi(2);
        let mut st = RunStats::new();
        let empty = WeightedList { level: 4, entries: vec![] };
        let out = halve(&view, b, &empty, 0.3, 0.1, &mut seeded(2), &ConstantsProfile::light(), &mut st).unwrap();
        assert!(out.is_empty());
        assert_eq!(out.level, 3);

        let one = WeightedList::new(4, vec![entry(1.0, (0..16).collect(), 120.0)]).unwrap();
        let out = halve(&view, b, &one, 0.3, 0.1, &mut seeded(3), &ConstantsProfile::light(), &mut st).unwrap();
        assert_eq!(out.level, 3);
        assert!(!out.is_empty());
        assert!(out.entries.iter().all(|e| e.set.len() == 8 && e.estimate > 0.0));

        assert!(halve(&view, b / 2.0, &one, 0.3, 0.1, &mut seeded(3), &ConstantsProfile::light(), &mut st).is_err());
        let low = WeightedList::new(3, vec![entry(1.0, (0..8).collect(), 28.0)]).unwrap();
        assert!(halve(&view, b, &low, 0.3, 0.1, &mut seeded(3), &ConstantsProfile::light(), &mut st).is_err());
    }

    #[test]
    fn helper_count_exact_path() {
        let g = Hypergraph::complete(8, 2).unwrap();
        let mut st = RunStats::new();
        let v = View::whole(&g);
        assert_eq!(helper_count(&v, 0.3, &mut seeded(4), &ConstantsProfile::light(), &mut st).unwrap(), 28.0);
        assert_eq!(st.oracle_queries, 28);
        assert!(helper_count(&v, 0.5, &mut seeded(4), &ConstantsProfile::light(), &mut st).is_err());
    }

    #[test]
    fn helper_count_zero_via_coarse() {
        let g = Hypergraph::empty(64, 2).unwrap();
        let v = View::whole(&g);
        let p = ConstantsProfile::light().with_exact_threshold(16);
        let mut st = RunStats::new();
        assert_eq!(helper_count(&v, 0.3, &mut seeded(5), &p, &mut st).unwrap(), 0.0);
        assert_eq!(st.coarse_calls, 1);
    }

    #[test]
    fn count_validates_and_pads() {
        let g = Hypergraph::new(12, 3, vec![vec![0, 1, 2], vec![3, 7, 11], vec![2, 5, 9]]).unwrap();
        let mut st = RunStats::new();
        let light = ConstantsProfile::light();
        assert_eq!(count(&g, 0.2, 0.1, &mut seeded(6), &light, &mut st).unwrap(), 3.0);
        assert!(count(&g, 0.0, 0.1, &mut seeded(6), &light, &mut st).is_err());
        assert!(count(&g, 0.2, 1.0, &mut seeded(6), &light, &mut st).is_err());
        let empty = Hypergraph::empty(20, 2).unwrap();
        assert_eq!(count(&empty, 0.5, 0.5, &mut seeded(6), &light, &mut st).unwrap(), 0.0);
    }
}
