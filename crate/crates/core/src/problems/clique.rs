//! Exact-weight k-clique: k pairwise adjacent vertices whose edge weights
//! sum to zero.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{trivially_independent, Decider};
use crate::error::{invalid, malformed, Error, Result};
use crate::hypergraph::{k_subsets, ColourClasses};
use crate::oracle::{Answer, IndependenceOracle};

/// A simple undirected graph on `0..n` with integer edge weights in
/// `[-max_weight, max_weight]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawWeighted", into = "RawWeighted")]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    max_weight: i64,
    weight: HashMap<(usize, usize), i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWeighted {
    n: usize,
    edges: Vec<(usize, usize, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    max_weight: Option<i64>,
}

impl TryFrom<RawWeighted> for WeightedGraph {
    type Error = Error;
    fn try_from(raw: RawWeighted) -> Result<Self> {
        WeightedGraph::new(raw.n, raw.edges, raw.max_weight)
    }
}

impl From<WeightedGraph> for RawWeighted {
    fn from(g: WeightedGraph) -> Self {
        RawWeighted {
            n: g.n,
            edges: g.edges,
            max_weight: Some(g.max_weight),
        }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl WeightedGraph {
    /// Without `max_weight` the bound is the largest weight magnitude.
    pub fn new(n: usize, edges: Vec<(usize, usize, i64)>, max_weight: Option<i64>) -> Result<Self> {
        let bound = match max_weight {
            Some(m) if m < 0 => return Err(malformed("max_weight", "must be non-negative")),
            Some(m) => m,
            None => edges.iter().map(|e| e.2.saturating_abs()).max().unwrap_or(0),
        };
        let mut weight = HashMap::with_capacity(edges.len());
        for (idx, &(u, v, w)) in edges.iter().enumerate() {
            let path = || format!("edges[{idx}]");
            if u >= n || v >= n {
                return Err(malformed(path(), format!("endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(malformed(path(), "self-loop"));
            }
            if w.unsigned_abs() > bound as u64 {
                return Err(malformed(path(), format!("weight {w} outside [-{bound}, {bound}]")));
            }
            if weight.insert(key(u, v), w).is_some() {
                return Err(malformed(path(), "duplicate edge"));
            }
        }
        Ok(WeightedGraph {
            n,
            edges,
            max_weight: bound,
            weight,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize, i64)] {
        &self.edges
    }

    pub fn max_weight(&self) -> i64 {
        self.max_weight
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<i64> {
        self.weight.get(&key(u, v)).copied()
    }

    /// Vertex sets of all zero-weight k-cliques, sorted.
    pub fn zero_weight_cliques(&self, k: usize) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.n).collect();
        k_subsets(&all, k)
            .filter(|s| {
                let mut total = 0i128;
                for (a, &u) in s.iter().enumerate() {
                    for &v in &s[a + 1..] {
                        match self.weight(u, v) {
                            Some(w) => total += w as i128,
                            None => return false,
                        }
                    }
                }
                total == 0
            })
            .collect()
    }
}

/// Is there a zero-weight clique with one vertex in each class, using only
/// the listed edges?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueQuery {
    pub classes: Vec<Vec<usize>>,
    /// Inter-class edges, keyed by `(min, max)` endpoint.
    pub weights: HashMap<(usize, usize), i64>,
}

/// Depth-first search over one vertex per class, extending only through
/// vertices adjacent to everything chosen so far.
#[derive(Debug, Clone, Copy, Default)]
pub struct CliqueBruteForce;

fn clique_search(q: &CliqueQuery, chosen: &mut Vec<usize>, total: i128) -> bool {
    let depth = chosen.len();
    if depth == q.classes.len() {
        return total == 0;
    }
    for &v in &q.classes[depth] {
        let mut add = 0i128;
        let mut adjacent = true;
        for &u in chosen.iter() {
            match q.weights.get(&key(u, v)) {
                Some(&w) => add += w as i128,
                None => {
                    adjacent = false;
                    break;
                }
            }
        }
        if adjacent {
            chosen.push(v);
            let found = clique_search(q, chosen, total + add);
            chosen.pop();
            if found {
                return true;
            }
        }
    }
    false
}

impl Decider<CliqueQuery> for CliqueBruteForce {
    fn decide(&self, q: &CliqueQuery) -> bool {
        clique_search(q, &mut Vec::with_capacity(q.classes.len()), 0)
    }
}

/// Oracle whose edges are the zero-weight k-cliques of a graph.
#[derive(Debug, Clone)]
pub struct ExactWeightCliqueOracle<D> {
    g: WeightedGraph,
    k: usize,
    decider: D,
}

pub fn exact_weight_clique_oracle<D: Decider<CliqueQuery>>(
    g: WeightedGraph,
    k: usize,
    decider: D,
) -> Result<ExactWeightCliqueOracle<D>> {
    if !(3..=64).contains(&k) {
        return Err(invalid(format!("clique size must lie in 3..=64, got {k}")));
    }
    Ok(ExactWeightCliqueOracle { g, k, decider })
}

impl<D> ExactWeightCliqueOracle<D> {
    pub fn graph(&self) -> &WeightedGraph {
        &self.g
    }
}

impl<D: Decider<CliqueQuery>> IndependenceOracle for ExactWeightCliqueOracle<D> {
    fn vertex_count(&self) -> usize {
        self.g.n
    }

    fn arity(&self) -> usize {
        self.k
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        if trivially_independent(classes, self.k)? {
            return Ok(Answer::Independent);
        }
        let label = classes.labels(self.g.n);
        let weights = self
            .g
            .weight
            .iter()
            .filter(|(&(u, v), _)| matches!((label[u], label[v]), (Some(a), Some(b)) if a != b))
            .map(|(&e, &w)| (e, w))
            .collect();
        let q = CliqueQuery {
            classes: classes.iter().cloned().collect(),
            weights,
        };
        Ok(Answer::from_has_edge(self.decider.decide(&q)))
    }

    fn failure_probability(&self) -> f64 {
        self.decider.failure_probability()
    }
}
