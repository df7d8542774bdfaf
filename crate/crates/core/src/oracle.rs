//! The coloured independence oracle and the bookkeeping around it.
//!
//! Every algorithm in this crate touches its input only through
//! [`IndependenceOracle::query`], routed via [`RunStats::ask`] so that each
//! query is counted against the run and checked against its budget.

use std::cell::Cell;
use std::sync::Arc;
use std::time::Duration;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::hypergraph::{k_subsets, ColourClasses, Hypergraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    /// No edge takes exactly one vertex from each class.
    Independent,
    HasEdge,
}

impl Answer {
    pub fn has_edge(self) -> bool {
        self == Answer::HasEdge
    }

    pub fn from_has_edge(b: bool) -> Self {
        if b {
            Answer::HasEdge
        } else {
            Answer::Independent
        }
    }
}

/// Coloured oracle access to a k-hypergraph on `0..vertex_count()`.
///
/// `query` must answer [`Answer::HasEdge`] exactly when some edge has one
/// vertex in each of the `k` classes. Implementations backed by randomized
/// deciders report their per-query error through `failure_probability`.
pub trait IndependenceOracle: Send + Sync {
    fn vertex_count(&self) -> usize;

    fn arity(&self) -> usize;

    fn query(&self, classes: &ColourClasses) -> Result<Answer>;

    fn failure_probability(&self) -> f64 {
        0.0
    }

    /// Underlying decider invocations spent per query.
    fn decider_calls_per_query(&self) -> u64 {
        1
    }
}

impl<T: IndependenceOracle + ?Sized> IndependenceOracle for &T {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        (**self).query(classes)
    }
    fn failure_probability(&self) -> f64 {
        (**self).failure_probability()
    }
    fn decider_calls_per_query(&self) -> u64 {
        (**self).decider_calls_per_query()
    }
}

impl<T: IndependenceOracle + ?Sized> IndependenceOracle for Box<T> {
    fn vertex_count(&self) -> usize {
        (**self).vertex_count()
    }
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        (**self).query(classes)
    }
    fn failure_probability(&self) -> f64 {
        (**self).failure_probability()
    }
    fn decider_calls_per_query(&self) -> u64 {
        (**self).decider_calls_per_query()
    }
}

/// Per-run counters. Owned by a single run; merged with [`RunStats::absorb`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunStats {
    pub oracle_queries: u64,
    pub decider_calls: u64,
    pub coarse_calls: u64,
    pub rejections: u64,
    /// Weighted-list entries whose mass exceeded the top importance bucket.
    pub promise_violations: u64,
    /// Inner runs abandoned for exceeding their query budget.
    pub budget_overruns: u64,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    limit: Option<u64>,
}

impl RunStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_limit(limit: u64) -> Self {
        RunStats {
            limit: Some(limit),
            ..Self::default()
        }
    }

    pub fn limit(&self) -> Option<u64> {
        self.limit
    }

    /// Issues one counted query.
    pub fn ask<O: IndependenceOracle + ?Sized>(
        &mut self,
        oracle: &O,
        classes: &ColourClasses,
    ) -> Result<Answer> {
        if let Some(limit) = self.limit {
            if self.oracle_queries >= limit {
                return Err(Error::BudgetExhausted { limit });
            }
        }
        self.oracle_queries += 1;
        self.decider_calls += oracle.decider_calls_per_query();
        oracle.query(classes)
    }

    /// Adds `other`'s counters into `self`; the budget is left untouched.
    pub fn absorb(&mut self, other: &RunStats) {
        self.oracle_queries += other.oracle_queries;
        self.decider_calls += other.decider_calls;
        self.coarse_calls += other.coarse_calls;
        self.rejections += other.rejections;
        self.promise_violations += other.promise_violations;
        self.budget_overruns += other.budget_overruns;
        self.elapsed += other.elapsed;
    }

    /// Queries left before the budget trips.
    pub fn remaining(&self) -> Option<u64> {
        self.limit.map(|l| l.saturating_sub(self.oracle_queries))
    }
}

/// A relabelled window onto another oracle.
///
/// Covers both the induced subgraph `G[S]` (vertex `i` of the view is
/// `S[i]` of the base) and padding with isolated vertices (view vertices
/// with no base counterpart). Nested restrictions compose into one map.
#[derive(Clone)]
pub struct View<'a> {
    base: &'a dyn IndependenceOracle,
    n: usize,
    /// `None`: vertex `v` is base vertex `v` when `v < base.n`, else isolated.
    map: Option<Arc<[u32]>>,
}

const ISOLATED: u32 = u32::MAX;

thread_local! {
    /// Reusable translated classes; taken while a query is in flight.
    static SCRATCH: Cell<Vec<Vec<usize>>> = const { Cell::new(Vec::new()) };
}

impl<'a> View<'a> {
    pub fn whole(base: &'a dyn IndependenceOracle) -> Self {
        View {
            base,
            n: base.vertex_count(),
            map: None,
        }
    }

    fn base_vertex(&self, v: usize) -> Option<usize> {
        match &self.map {
            None => (v < self.base.vertex_count()).then_some(v),
            Some(map) => {
                let b = map[v];
                (b != ISOLATED).then_some(b as usize)
            }
        }
    }

    /// The induced subgraph on `subset` (vertices of this view), relabelled
    /// so that view vertex `i` is `subset[i]`.
    pub fn restrict(&self, subset: &[usize]) -> Result<View<'a>> {
        let mut map = Vec::with_capacity(subset.len());
        for &v in subset {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} outside view of size {}", self.n)));
            }
            map.push(self.base_vertex(v).map_or(ISOLATED, |b| b as u32));
        }
        Ok(View {
            base: self.base,
            n: subset.len(),
            map: Some(map.into()),
        })
    }

    /// Translates a subset of this view's vertices to base vertices,
    /// dropping padded ones.
    pub fn to_base(&self, vertices: &[usize]) -> Vec<usize> {
        vertices.iter().filter_map(|&v| self.base_vertex(v)).collect()
    }
}

impl IndependenceOracle for View<'_> {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        if self.map.is_none() && self.n == self.base.vertex_count() {
            return self.base.query(classes);
        }
        let mut translated = SCRATCH.with(Cell::take);
        translated.resize(classes.len(), Vec::new());
        for (out, class) in translated.iter_mut().zip(classes) {
            out.clear();
            out.extend(class.iter().filter_map(|&v| self.base_vertex(v)));
        }
        let query = ColourClasses::from_disjoint(translated);
        let answer = self.base.query(&query);
        SCRATCH.with(|cell| cell.set(query.into_inner()));
        answer
    }

    fn failure_probability(&self) -> f64 {
        self.base.failure_probability()
    }

    fn decider_calls_per_query(&self) -> u64 {
        self.base.decider_calls_per_query()
    }
}

/// Pads the vertex set up to the next power of two with isolated vertices.
pub fn pad_to_power_of_two(oracle: &dyn IndependenceOracle) -> View<'_> {
    let n = oracle.vertex_count();
    View {
        base: oracle,
        n: n.max(1).next_power_of_two(),
        map: None,
    }
}

/// Answers a validated query directly against an explicit hypergraph.
pub fn exact_cind(g: &Hypergraph, classes: &ColourClasses, stats: &mut RunStats) -> Result<Answer> {
    let checked = ColourClasses::new(classes.clone().into_inner(), g.vertex_count())?;
    if checked.len() != g.arity() {
        return Err(invalid(format!(
            "expected {} classes, got {}",
            g.arity(),
            checked.len()
        )));
    }
    stats.ask(g, &checked)
}

/// Every edge inside `subset`, found by querying each k-subset as k
/// singleton classes. Issues exactly `C(|subset|, k)` queries.
pub fn enumerate_edges_within<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    subset: &[usize],
    stats: &mut RunStats,
) -> Result<Vec<Vec<usize>>> {
    let k = oracle.arity();
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut found = Vec::new();
    for y in k_subsets(&sorted, k) {
        if stats.ask(oracle, &ColourClasses::singletons(&y))?.has_edge() {
            found.push(y);
        }
    }
    Ok(found)
}

/// Number of edges inside `subset`, by enumeration.
pub fn count_edges_within<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    subset: &[usize],
    stats: &mut RunStats,
) -> Result<u64> {
    Ok(enumerate_edges_within(oracle, subset, stats)?.len() as u64)
}
