//! Colourful copies of a small pattern graph `H` in a vertex-coloured host.

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{permutations, trivially_independent, Decider};
use crate::count::count;
use crate::error::{invalid, malformed, Error, Result};
use crate::hypergraph::ColourClasses;
use crate::numeric::factorial;
use crate::oracle::{Answer, IndependenceOracle, RunStats};
use crate::profile::ConstantsProfile;

/// Largest pattern accepted; bijections and automorphisms are enumerated.
pub const MAX_PATTERN_VERTICES: usize = 10;

/// A simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct SimpleGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacent: HashSet<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<RawGraph> for SimpleGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        SimpleGraph::new(raw.n, raw.edges)
    }
}

impl From<SimpleGraph> for RawGraph {
    fn from(g: SimpleGraph) -> Self {
        RawGraph { n: g.n, edges: g.edges }
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

impl SimpleGraph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adjacent = HashSet::with_capacity(edges.len());
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let path = || format!("edges[{idx}]");
            if u >= n || v >= n {
                return Err(malformed(path(), format!("endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(malformed(path(), "self-loop"));
            }
            if !adjacent.insert(key(u, v)) {
                return Err(malformed(path(), "duplicate edge"));
            }
        }
        Ok(SimpleGraph { n, edges, adjacent })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacent.contains(&key(u, v))
    }
}

/// Number of vertex permutations of `h` that map edges to edges.
pub fn automorphism_count(h: &SimpleGraph) -> Result<u64> {
    if h.n > MAX_PATTERN_VERTICES {
        return Err(Error::UnsupportedParameter(format!(
            "pattern has {} vertices, at most {MAX_PATTERN_VERTICES} supported",
            h.n
        )));
    }
    let count = permutations(h.n)
        .into_iter()
        .filter(|p| h.edges.iter().all(|&(u, v)| h.has_edge(p[u], p[v])))
        .count();
    Ok(count as u64)
}

/// Host graph `G`, colouring `c: V(G) -> 0..k` and pattern `H` on `k`
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct PatternInstance {
    pattern: SimpleGraph,
    graph: SimpleGraph,
    colours: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPattern {
    pattern: RawGraph,
    graph: RawGraph,
    colours: Vec<usize>,
}

fn nested(prefix: &str, e: Error) -> Error {
    match e {
        Error::MalformedInstance { path, reason } => malformed(format!("{prefix}.{path}"), reason),
        other => other,
    }
}

impl TryFrom<RawPattern> for PatternInstance {
    type Error = Error;
    fn try_from(raw: RawPattern) -> Result<Self> {
        let pattern = SimpleGraph::try_from(raw.pattern).map_err(|e| nested("pattern", e))?;
        let graph = SimpleGraph::try_from(raw.graph).map_err(|e| nested("graph", e))?;
        PatternInstance::new(pattern, graph, raw.colours)
    }
}

impl From<PatternInstance> for RawPattern {
    fn from(p: PatternInstance) -> Self {
        RawPattern {
            pattern: p.pattern.into(),
            graph: p.graph.into(),
            colours: p.colours,
        }
    }
}

impl PatternInstance {
    pub fn new(pattern: SimpleGraph, graph: SimpleGraph, colours: Vec<usize>) -> Result<Self> {
        let k = pattern.n;
        if k < 2 {
            return Err(malformed("pattern.n", "pattern needs at least 2 vertices"));
        }
        if k > MAX_PATTERN_VERTICES {
            return Err(Error::UnsupportedParameter(format!(
                "pattern has {k} vertices, at most {MAX_PATTERN_VERTICES} supported"
            )));
        }
        if colours.len() != graph.n {
            return Err(malformed(
                "colours",
                format!("expected {} colours, got {}", graph.n, colours.len()),
            ));
        }
        if let Some(j) = colours.iter().position(|&c| c >= k) {
            return Err(malformed(format!("colours[{j}]"), format!("colour outside 0..{k}")));
        }
        Ok(PatternInstance {
            pattern,
            graph,
            colours,
        })
    }

    pub fn k(&self) -> usize {
        self.pattern.n
    }

    pub fn pattern(&self) -> &SimpleGraph {
        &self.pattern
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn colours(&self) -> &[usize] {
        &self.colours
    }

    /// Injective maps `V(H) -> V(G)` onto distinct colours that send
    /// H-edges to G-edges, divided by `|Aut(H)|`.
    pub fn colourful_copy_count(&self) -> Result<u64> {
        let k = self.k();
        let mut by_colour = vec![Vec::new(); k];
        for (v, &c) in self.colours.iter().enumerate() {
            by_colour[c].push(v);
        }
        let mut embeddings = 0u64;
        for d in permutations(k) {
            // vertex a of H lands on a vertex of colour d[a]
            let mut phi = vec![0usize; k];
            embeddings += self.embed(&d, &by_colour, 0, &mut phi);
        }
        Ok(embeddings / automorphism_count(&self.pattern)?)
    }

    fn embed(&self, d: &[usize], by_colour: &[Vec<usize>], a: usize, phi: &mut Vec<usize>) -> u64 {
        if a == d.len() {
            return 1;
        }
        let mut total = 0;
        for &v in &by_colour[d[a]] {
            let ok = self.pattern.edges.iter().all(|&(x, y)| {
                let other = match (x == a, y == a) {
                    (true, _) => y,
                    (_, true) => x,
                    _ => return true,
                };
                other > a || self.graph.has_edge(v, phi[other])
            });
            if ok {
                phi[a] = v;
                total += self.embed(d, by_colour, a + 1, phi);
            }
        }
        total
    }
}

/// Is there one vertex per class, carrying pairwise distinct host colours,
/// such that every required colour pair is joined by a listed edge?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourfulQuery {
    pub classes: Vec<Vec<usize>>,
    /// Host colour of every vertex in `0..n`.
    pub colours: Vec<usize>,
    pub k: usize,
    /// Colour pairs that must be adjacent, as `(min, max)`.
    pub required: HashSet<(usize, usize)>,
    /// Host edges that survived restriction and pruning, as `(min, max)`.
    pub edges: HashSet<(usize, usize)>,
}

/// Depth-first search over one vertex per class.
#[derive(Debug, Clone, Copy, Default)]
pub struct ColourfulBruteForce;

fn colourful_search(q: &ColourfulQuery, chosen: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let depth = chosen.len();
    if depth == q.classes.len() {
        return true;
    }
    for &v in &q.classes[depth] {
        let c = q.colours[v];
        if used[c] {
            continue;
        }
        let fits = chosen
            .iter()
            .all(|&u| !q.required.contains(&key(c, q.colours[u])) || q.edges.contains(&key(u, v)));
        if fits {
            used[c] = true;
            chosen.push(v);
            let found = colourful_search(q, chosen, used);
            chosen.pop();
            used[c] = false;
            if found {
                return true;
            }
        }
    }
    false
}

impl Decider<ColourfulQuery> for ColourfulBruteForce {
    fn decide(&self, q: &ColourfulQuery) -> bool {
        colourful_search(q, &mut Vec::with_capacity(q.k), &mut vec![false; q.k])
    }
}

/// Oracle for `G_d`: its edges are the colourful k-sets of the host that
/// host `H` with H-vertex `a` on the vertex of colour `d[a]`.
#[derive(Debug, Clone)]
pub struct ColourfulHOracle<'a, D> {
    inst: &'a PatternInstance,
    required: HashSet<(usize, usize)>,
    decider: D,
}

/// `d` maps pattern vertices to colours and must be a bijection onto `0..k`.
pub fn colourful_h_oracle<'a, D: Decider<ColourfulQuery>>(
    inst: &'a PatternInstance,
    d: &[usize],
    decider: D,
) -> Result<ColourfulHOracle<'a, D>> {
    let k = inst.k();
    let mut seen = vec![false; k];
    if d.len() != k || d.iter().any(|&c| c >= k || std::mem::replace(&mut seen[c], true)) {
        return Err(invalid(format!("{d:?} is not a bijection onto 0..{k}")));
    }
    let required = inst.pattern.edges.iter().map(|&(a, b)| key(d[a], d[b])).collect();
    Ok(ColourfulHOracle {
        inst,
        required,
        decider,
    })
}

impl<D: Decider<ColourfulQuery>> IndependenceOracle for ColourfulHOracle<'_, D> {
    fn vertex_count(&self) -> usize {
        self.inst.graph.n
    }

    fn arity(&self) -> usize {
        self.inst.k()
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        if trivially_independent(classes, self.inst.k())? {
            return Ok(Answer::Independent);
        }
        let label = classes.labels(self.inst.graph.n);
        let colours = &self.inst.colours;
        let edges = self
            .inst
            .graph
            .adjacent
            .iter()
            .filter(|&&(u, v)| matches!((label[u], label[v]), (Some(a), Some(b)) if a != b))
            .filter(|&&(u, v)| self.required.contains(&key(colours[u], colours[v])))
            .copied()
            .collect();
        let q = ColourfulQuery {
            classes: classes.iter().cloned().collect(),
            colours: colours.clone(),
            k: self.inst.k(),
            required: self.required.clone(),
            edges,
        };
        Ok(Answer::from_has_edge(self.decider.decide(&q)))
    }

    fn failure_probability(&self) -> f64 {
        self.decider.failure_probability()
    }
}

/// Estimated number of colourful copies of `H`:
/// `sum_d Count(G_d, epsilon, delta / k!) / |Aut(H)|` over all bijections `d`.
///
/// Returns `-1` if any inner count exhausted its budget.
pub fn count_colourful_h<R: Rng + ?Sized>(
    inst: &PatternInstance,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<f64> {
    let k = inst.k();
    let aut = automorphism_count(&inst.pattern)?;
    let inner_delta = delta / factorial(k);
    let mut total = 0.0;
    let mut overrun = false;
    for d in permutations(k) {
        let oracle = colourful_h_oracle(inst, &d, ColourfulBruteForce)?;
        let e = count(&oracle, epsilon, inner_delta, rng, profile, stats)?;
        if e < 0.0 {
            overrun = true;
        } else {
            total += e;
        }
    }
    Ok(if overrun { -1.0 } else { total / aut as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_edges_within;
    use crate::random::seeded;

    fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
        SimpleGraph::new(n, edges.to_vec()).unwrap()
    }

    #[test]
    fn automorphisms() {
        assert_eq!(automorphism_count(&graph(3, &[(0, 1), (1, 2), (0, 2)])).unwrap(), 6);
        assert_eq!(automorphism_count(&graph(3, &[(0, 1), (1, 2)])).unwrap(), 2);
        assert_eq!(automorphism_count(&graph(2, &[(0, 1)])).unwrap(), 2);
        assert_eq!(automorphism_count(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])).unwrap(), 8);
        assert!(matches!(automorphism_count(&graph(11, &[])), Err(Error::UnsupportedParameter(_))));
    }

    #[test]
    fn single_edge_pattern() {
        let inst = PatternInstance::new(graph(2, &[(0, 1)]), graph(2, &[(0, 1)]), vec![0, 1]).unwrap();
        let q = ColourClasses::singletons(&[0, 1]);
        for d in [[0, 1], [1, 0]] {
            let o = colourful_h_oracle(&inst, &d, ColourfulBruteForce).unwrap();
            assert_eq!(o.query(&q).unwrap(), Answer::HasEdge);
        }
        assert_eq!(inst.colourful_copy_count().unwrap(), 1);
        let mut st = RunStats::new();
        let est = count_colourful_h(&inst, 0.1, 0.1, &mut seeded(0), &ConstantsProfile::light(), &mut st).unwrap();
        assert_eq!(est, 1.0);
    }

    #[test]
    fn missing_colour_pair_is_independent() {
        // path 0-1-2 in H; host has no edges between colours 0 and 1
        let h = graph(3, &[(0, 1), (1, 2)]);
        let g = graph(4, &[(0, 2), (1, 2), (2, 3)]);
        let inst = PatternInstance::new(h, g, vec![0, 1, 2, 2]).unwrap();
        let o = colourful_h_oracle(&inst, &[0, 1, 2], ColourfulBruteForce).unwrap();
        let mut st = RunStats::new();
        assert!(enumerate_edges_within(&o, &[0, 1, 2, 3], &mut st).unwrap().is_empty());
        let o = colourful_h_oracle(&inst, &[0, 2, 1], ColourfulBruteForce).unwrap();
        assert_eq!(enumerate_edges_within(&o, &[0, 1, 2, 3], &mut st).unwrap(), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn zero_copies_count_zero() {
        let inst = PatternInstance::new(graph(2, &[(0, 1)]), graph(3, &[(0, 1)]), vec![0, 0, 1]).unwrap();
        let mut st = RunStats::new();
        let est = count_colourful_h(&inst, 0.1, 0.1, &mut seeded(0), &ConstantsProfile::light(), &mut st).unwrap();
        assert_eq!(est, 0.0);
    }

    #[test]
    fn rejects_non_bijection() {
        let inst = PatternInstance::new(graph(2, &[(0, 1)]), graph(2, &[(0, 1)]), vec![0, 1]).unwrap();
        assert!(colourful_h_oracle(&inst, &[0, 0], ColourfulBruteForce).is_err());
        assert!(colourful_h_oracle(&inst, &[0], ColourfulBruteForce).is_err());
    }

    #[test]
    fn validation_paths() {
        let err = PatternInstance::new(graph(2, &[(0, 1)]), graph(2, &[]), vec![0, 2]).unwrap_err();
        assert!(matches!(err, Error::MalformedInstance { ref path, .. } if path == "colours[1]"));
        let raw = r#"{"pattern":{"n":2,"edges":[[0,1]]},"graph":{"n":2,"edges":[[0,0]]},"colours":[0,1]}"#;
        let err = serde_json::from_str::<PatternInstance>(raw).unwrap_err().to_string();
        assert!(err.contains("graph.edges[0]"), "{err}");
    }
}
