//! k-Orthogonal Vectors: one vector from each of k lists with zero
//! generalized inner product.

use serde::{Deserialize, Serialize};

use super::{permutations, trivially_independent, Decider};
use crate::error::{malformed, Error, Result};
use crate::hypergraph::ColourClasses;
use crate::oracle::{Answer, IndependenceOracle};

/// `k` lists of `d`-bit vectors, given as `'0'`/`'1'` strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKov", into = "RawKov")]
pub struct KovInstance {
    d: usize,
    sets: Vec<Vec<String>>,
    words: usize,
    /// `packed[i][j]` holds vector `j` of list `i`, 64 coordinates per word.
    packed: Vec<Vec<Vec<u64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKov {
    d: usize,
    sets: Vec<Vec<String>>,
}

impl TryFrom<RawKov> for KovInstance {
    type Error = Error;
    fn try_from(raw: RawKov) -> Result<Self> {
        KovInstance::new(raw.d, raw.sets)
    }
}

impl From<KovInstance> for RawKov {
    fn from(inst: KovInstance) -> Self {
        RawKov {
            d: inst.d,
            sets: inst.sets,
        }
    }
}

impl KovInstance {
    pub fn new(d: usize, sets: Vec<Vec<String>>) -> Result<Self> {
        if d == 0 {
            return Err(malformed("d", "dimension must be positive"));
        }
        if !(2..=64).contains(&sets.len()) {
            return Err(malformed("sets", format!("need 2..=64 lists, got {}", sets.len())));
        }
        let words = d.div_ceil(64);
        let mut packed = Vec::with_capacity(sets.len());
        for (i, list) in sets.iter().enumerate() {
            let mut out = Vec::with_capacity(list.len());
            for (j, s) in list.iter().enumerate() {
                let path = || format!("sets[{i}][{j}]");
                if s.len() != d {
                    return Err(malformed(path(), format!("expected {d} bits, got {}", s.len())));
                }
                let mut v = vec![0u64; words];
                for (c, b) in s.bytes().enumerate() {
                    match b {
                        b'0' => {}
                        b'1' => v[c / 64] |= 1 << (c % 64),
                        _ => return Err(malformed(path(), "bits must be '0' or '1'")),
                    }
                }
                out.push(v);
            }
            packed.push(out);
        }
        Ok(KovInstance {
            d,
            sets,
            words,
            packed,
        })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Total number of vectors; the oracle's vertex count.
    pub fn vertex_count(&self) -> usize {
        self.sets.iter().map(Vec::len).sum()
    }

    /// Flattened vertex of vector `j` in list `i`.
    pub fn vertex(&self, i: usize, j: usize) -> usize {
        self.sets[..i].iter().map(Vec::len).sum::<usize>() + j
    }

    /// Vertex sets of all orthogonal k-tuples, sorted.
    pub fn witnesses(&self) -> Vec<Vec<usize>> {
        let k = self.k();
        let mut out = Vec::new();
        let mut pick = vec![0usize; k];
        if self.sets.iter().any(Vec::is_empty) {
            return out;
        }
        loop {
            let orthogonal = (0..self.words).all(|w| (0..k).fold(u64::MAX, |acc, i| acc & self.packed[i][pick[i]][w]) == 0);
            if orthogonal {
                out.push((0..k).map(|i| self.vertex(i, pick[i])).collect());
            }
            let mut i = k;
            loop {
                if i == 0 {
                    out.sort();
                    return out;
                }
                i -= 1;
                pick[i] += 1;
                if pick[i] < self.sets[i].len() {
                    break;
                }
                pick[i] = 0;
            }
        }
    }
}

/// Is there one vector per list whose coordinatewise AND is all zero?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OvQuery {
    /// 64-bit words per vector.
    pub words: usize,
    /// Each list is its vectors concatenated.
    pub lists: Vec<Vec<u64>>,
}

/// Depth-first search over one vector per list, carrying the running AND.
#[derive(Debug, Clone, Copy, Default)]
pub struct OvBruteForce;

fn ov_search(q: &OvQuery, depth: usize, acc: &[u64]) -> bool {
    if depth == q.lists.len() {
        return acc.iter().all(|&w| w == 0);
    }
    if acc.iter().all(|&w| w == 0) {
        return q.lists[depth..].iter().all(|l| !l.is_empty());
    }
    q.lists[depth].chunks_exact(q.words).any(|v| {
        let next: Vec<u64> = acc.iter().zip(v).map(|(a, b)| a & b).collect();
        ov_search(q, depth + 1, &next)
    })
}

impl Decider<OvQuery> for OvBruteForce {
    fn decide(&self, q: &OvQuery) -> bool {
        if q.words == 0 {
            return q.lists.iter().all(|l| !l.is_empty());
        }
        ov_search(q, 0, &vec![u64::MAX; q.words])
    }
}

/// Oracle whose edges are the orthogonal k-tuples of a [`KovInstance`].
///
/// Vertex `(j, i)` (vector `j` of list `i`) is flattened to
/// [`KovInstance::vertex`]. A query class may mix vectors from different
/// lists, so every matching of query classes to lists is tried: under the
/// matching `pi`, query class `a` contributes its vectors tagged `pi(a)`.
#[derive(Debug, Clone)]
pub struct KovOracle<D> {
    inst: KovInstance,
    /// List index and position of each flattened vertex.
    tag: Vec<(usize, usize)>,
    perms: Vec<Vec<usize>>,
    decider: D,
}

pub fn kov_oracle<D: Decider<OvQuery>>(inst: KovInstance, decider: D) -> KovOracle<D> {
    let tag = inst
        .sets
        .iter()
        .enumerate()
        .flat_map(|(i, l)| (0..l.len()).map(move |j| (i, j)))
        .collect();
    let perms = permutations(inst.k());
    KovOracle {
        inst,
        tag,
        perms,
        decider,
    }
}

impl<D> KovOracle<D> {
    pub fn instance(&self) -> &KovInstance {
        &self.inst
    }
}

impl<D: Decider<OvQuery>> IndependenceOracle for KovOracle<D> {
    fn vertex_count(&self) -> usize {
        self.tag.len()
    }

    fn arity(&self) -> usize {
        self.inst.k()
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        let k = self.inst.k();
        if trivially_independent(classes, k)? {
            return Ok(Answer::Independent);
        }
        // present[a][i]: query class a holds some vector of list i.
        let mut present = vec![vec![false; k]; k];
        for (a, class) in classes.iter().enumerate() {
            for &v in class {
                present[a][self.tag[v].0] = true;
            }
        }
        for pi in &self.perms {
            if (0..k).any(|a| !present[a][pi[a]]) {
                continue;
            }
            let lists = classes
                .iter()
                .enumerate()
                .map(|(a, class)| {
                    class
                        .iter()
                        .filter(|&&v| self.tag[v].0 == pi[a])
                        .flat_map(|&v| {
                            let (i, j) = self.tag[v];
                            self.inst.packed[i][j].iter().copied()
                        })
                        .collect()
                })
                .collect();
            let q = OvQuery {
                words: self.inst.words,
                lists,
            };
            if self.decider.decide(&q) {
                return Ok(Answer::HasEdge);
            }
        }
        Ok(Answer::Independent)
    }

    fn failure_probability(&self) -> f64 {
        self.decider.failure_probability()
    }

    /// Upper bound: one call per matching of classes to lists.
    fn decider_calls_per_query(&self) -> u64 {
        self.perms.len() as u64
    }
}
