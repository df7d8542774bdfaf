//! Explicit k-hypergraphs and the vertex-class tuples used to query them.

use std::cell::Cell;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, malformed, Error, Result};
use crate::oracle::{Answer, IndependenceOracle};

/// A k-uniform hypergraph on the vertices `0..n`.
///
/// Edges are stored canonically: each edge sorted ascending, the edge list
/// sorted lexicographically, no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawHypergraph", into = "RawHypergraph")]
pub struct Hypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
    flat: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    n: usize,
    k: usize,
    edges: Vec<Vec<usize>>,
}

impl TryFrom<RawHypergraph> for Hypergraph {
    type Error = Error;

    fn try_from(raw: RawHypergraph) -> Result<Self> {
        Hypergraph::new(raw.n, raw.k, raw.edges)
    }
}

impl From<Hypergraph> for RawHypergraph {
    fn from(g: Hypergraph) -> Self {
        RawHypergraph {
            n: g.n,
            k: g.k,
            edges: g.edges,
        }
    }
}

impl Hypergraph {
    /// Builds a hypergraph, rejecting malformed edges and duplicates.
    pub fn new(n: usize, k: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if !(2..=64).contains(&k) {
            return Err(malformed("k", format!("arity must lie in 2..=64, got {k}")));
        }
        if n > u32::MAX as usize {
            return Err(malformed("n", "vertex count exceeds 32 bits"));
        }
        let mut seen = BTreeSet::new();
        let mut canonical = Vec::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            if edge.len() != k {
                return Err(malformed(
                    format!("edges[{idx}]"),
                    format!("expected {k} vertices, got {}", edge.len()),
                ));
            }
            edge.sort_unstable();
            if let Some(&v) = edge.iter().find(|&&v| v >= n) {
                return Err(malformed(
                    format!("edges[{idx}]"),
                    format!("vertex {v} out of range for n = {n}"),
                ));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(malformed(format!("edges[{idx}]"), "repeated vertex"));
            }
            if !seen.insert(edge.clone()) {
                return Err(malformed(format!("edges[{idx}]"), "duplicate edge"));
            }
            canonical.push(edge);
        }
        canonical.sort();
        let flat = canonical.iter().flatten().map(|&v| v as u32).collect();
        Ok(Hypergraph {
            n,
            k,
            edges: canonical,
            flat,
        })
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, Vec::new())
    }

    /// The complete k-uniform hypergraph on `n` vertices.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        let all: Vec<usize> = (0..n).collect();
        Self::new(n, k, k_subsets(&all, k).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, vertices: &[usize]) -> bool {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.edges.binary_search(&key).is_ok()
    }

    /// Number of edges containing every vertex of `subset`.
    pub fn degree(&self, subset: &[usize]) -> usize {
        self.edges
            .iter()
            .filter(|e| subset.iter().all(|v| e.binary_search(v).is_ok()))
            .count()
    }

    /// The hypergraph induced on `subset`, relabelled to `0..subset.len()`
    /// in the order the vertices are given.
    pub fn induced(&self, subset: &[usize]) -> Result<Self> {
        let mut relabel = vec![usize::MAX; self.n];
        for (i, &v) in subset.iter().enumerate() {
            if v >= self.n {
                return Err(invalid(format!("vertex {v} out of range")));
            }
            relabel[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| relabel[v] != usize::MAX))
            .map(|e| e.iter().map(|&v| relabel[v]).collect())
            .collect();
        Self::new(subset.len(), self.k, edges)
    }
}

thread_local! {
    /// Scratch vertex labels, all `u8::MAX` between queries.
    static LABELS: Cell<Vec<u8>> = const { Cell::new(Vec::new()) };
}

impl IndependenceOracle for Hypergraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn arity(&self) -> usize {
        self.k
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        let k = self.k;
        if classes.len() != k {
            return Err(invalid(format!("expected {k} classes, got {}", classes.len())));
        }
        if classes.iter().any(|c| c.is_empty()) {
            return Ok(Answer::Independent);
        }
        LABELS.with(|cell| {
            let mut label = cell.take();
            if label.len() < self.n {
                label.resize(self.n, u8::MAX);
            }
            for (i, class) in classes.iter().enumerate() {
                for &v in class {
                    label[v] = i as u8;
                }
            }
            let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
            let mut found = false;
            for edge in self.flat.chunks_exact(k) {
                let mut mask = 0u64;
                for &v in edge {
                    let l = label[v as usize];
                    if l == u8::MAX {
                        mask = 0;
                        break;
                    }
                    mask |= 1 << l;
                }
                if mask == full {
                    found = true;
                    break;
                }
            }
            for class in classes {
                for &v in class {
                    label[v] = u8::MAX;
                }
            }
            cell.set(label);
            Ok(Answer::from_has_edge(found))
        })
    }
}

/// An ordered tuple of pairwise-disjoint vertex classes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ColourClasses {
    classes: Vec<Vec<usize>>,
}

impl ColourClasses {
    /// Validates disjointness and that every vertex is below `n`.
    pub fn new(classes: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let mut owner = vec![usize::MAX; n];
        for (i, class) in classes.iter().enumerate() {
            for &v in class {
                if v >= n {
                    return Err(invalid(format!(
                        "class {i} contains vertex {v}, outside 0..{n}"
                    )));
                }
                if owner[v] != usize::MAX {
                    return Err(invalid(format!(
                        "vertex {v} appears in classes {} and {i}",
                        owner[v]
                    )));
                }
                owner[v] = i;
            }
        }
        Ok(ColourClasses { classes })
    }

    /// Skips validation; callers construct the classes disjoint and in range.
    pub(crate) fn from_disjoint(classes: Vec<Vec<usize>>) -> Self {
        ColourClasses { classes }
    }

    /// One singleton class per vertex of `vertices`.
    pub fn singletons(vertices: &[usize]) -> Self {
        ColourClasses {
            classes: vertices.iter().map(|&v| vec![v]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec<usize>> {
        self.classes.iter()
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub(crate) fn class_mut(&mut self, i: usize) -> &mut Vec<usize> {
        &mut self.classes[i]
    }

    pub fn into_inner(self) -> Vec<Vec<usize>> {
        self.classes
    }

    /// Vertex to class index, `None` for vertices outside every class.
    pub fn labels(&self, n: usize) -> Vec<Option<usize>> {
        let mut label = vec![None; n];
        for (i, class) in self.classes.iter().enumerate() {
            for &v in class {
                if v < n {
                    label[v] = Some(i);
                }
            }
        }
        label
    }
}

impl<'a> IntoIterator for &'a ColourClasses {
    type Item = &'a Vec<usize>;
    type IntoIter = std::slice::Iter<'a, Vec<usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.classes.iter()
    }
}

/// All `k`-subsets of `items`, in lexicographic order of positions.
pub fn k_subsets(items: &[usize], k: usize) -> KSubsets<'_> {
    KSubsets {
        items,
        idx: if k <= items.len() {
            Some((0..k).collect())
        } else {
            None
        },
    }
}

pub struct KSubsets<'a> {
    items: &'a [usize],
    idx: Option<Vec<usize>>,
}

impl Iterator for KSubsets<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let idx = self.idx.as_mut()?;
        let out = idx.iter().map(|&i| self.items[i]).collect();
        let n = self.items.len();
        let k = idx.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.idx = None;
                break;
            }
            pos -= 1;
            if idx[pos] < n - k + pos {
                idx[pos] += 1;
                for j in pos + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
