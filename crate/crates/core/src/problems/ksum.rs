//! k-SUM: k distinct elements summing to zero.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{trivially_independent, Decider};
use crate::error::{malformed, Error, Result};
use crate::hypergraph::{k_subsets, ColourClasses};
use crate::oracle::{Answer, IndependenceOracle};

/// Shifts `x` into class `i` (1-based) so that a zero-sum k-set of encoded
/// values must use each class exactly once.
///
/// `f_i(x) = (k+1)^k x + (k+1)^(i-1)` for `i < k` and
/// `f_k(x) = (k+1)^k x - sum_{i<k} (k+1)^(i-1)`.
pub fn ksum_encode(i: usize, k: usize, x: i128) -> Result<i128> {
    if k == 0 || i == 0 || i > k {
        return Err(Error::InvalidArgument(format!("class index {i} outside 1..={k}")));
    }
    let overflow = || Error::EncodingOverflow(format!("f_{i}({x}) with k = {k} exceeds 128 bits"));
    let base = (k as i128 + 1).checked_pow(k as u32).ok_or_else(overflow)?;
    let shifted = base.checked_mul(x).ok_or_else(overflow)?;
    let offset = if i < k {
        (k as i128 + 1).pow(i as u32 - 1)
    } else {
        -(0..k as u32 - 1).map(|e| (k as i128 + 1).pow(e)).sum::<i128>()
    };
    shifted.checked_add(offset).ok_or_else(overflow)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKSum", into = "RawKSum")]
pub struct KSumInstance {
    k: usize,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawKSum {
    k: usize,
    values: Vec<i64>,
}

impl TryFrom<RawKSum> for KSumInstance {
    type Error = Error;
    fn try_from(raw: RawKSum) -> Result<Self> {
        KSumInstance::new(raw.k, raw.values)
    }
}

impl From<KSumInstance> for RawKSum {
    fn from(inst: KSumInstance) -> Self {
        RawKSum {
            k: inst.k,
            values: inst.values,
        }
    }
}

impl KSumInstance {
    /// Requires `k >= 3`, pairwise distinct values, and that a sum of `k`
    /// encoded values fits in 128 bits.
    pub fn new(k: usize, values: Vec<i64>) -> Result<Self> {
        if !(3..=64).contains(&k) {
            return Err(malformed("k", format!("k-SUM needs 3 <= k <= 64, got {k}")));
        }
        let mut first = HashMap::new();
        for (j, &v) in values.iter().enumerate() {
            if let Some(i) = first.insert(v, j) {
                return Err(malformed(format!("values[{j}]"), format!("duplicate of values[{i}]")));
            }
        }
        let max = values.iter().map(|v| v.unsigned_abs() as i128).max().unwrap_or(0);
        let fits = (k as i128 + 1)
            .checked_pow(k as u32)
            .and_then(|base| base.checked_mul(max + 1))
            .and_then(|m| m.checked_mul(k as i128))
            .is_some();
        if !fits {
            return Err(Error::EncodingOverflow(format!(
                "values up to {max} with k = {k} do not fit 128-bit encodings"
            )));
        }
        Ok(KSumInstance { k, values })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// Index sets of all zero-sum k-subsets, sorted.
    pub fn witnesses(&self) -> Vec<Vec<usize>> {
        let idx: Vec<usize> = (0..self.values.len()).collect();
        k_subsets(&idx, self.k)
            .filter(|s| s.iter().map(|&i| self.values[i] as i128).sum::<i128>() == 0)
            .collect()
    }
}

/// A k-SUM question: do some `k` distinct entries of `values` sum to zero?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumQuery {
    pub values: Vec<i128>,
    pub k: usize,
}

fn checked_sum(values: &[i128], idx: &[usize]) -> Option<i128> {
    idx.iter().try_fold(0i128, |acc, &i| acc.checked_add(values[i]))
}

/// Tries every k-subset.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumBruteForce;

impl Decider<SumQuery> for SumBruteForce {
    fn decide(&self, q: &SumQuery) -> bool {
        let idx: Vec<usize> = (0..q.values.len()).collect();
        k_subsets(&idx, q.k).any(|s| checked_sum(&q.values, &s) == Some(0))
    }
}

/// Hashes sums of `ceil(k/2)`-subsets, then looks up the negated sum of
/// every `floor(k/2)`-subset and checks the two halves are disjoint.
#[derive(Debug, Clone, Copy, Default)]
pub struct SumMeetInMiddle;

impl Decider<SumQuery> for SumMeetInMiddle {
    fn decide(&self, q: &SumQuery) -> bool {
        let k = q.k;
        let n = q.values.len();
        if k == 0 {
            return true;
        }
        if k > n {
            return false;
        }
        let idx: Vec<usize> = (0..n).collect();
        let (big, small) = (k.div_ceil(2), k / 2);
        let mut table: HashMap<i128, Vec<Vec<usize>>> = HashMap::new();
        for s in k_subsets(&idx, big) {
            if let Some(sum) = checked_sum(&q.values, &s) {
                table.entry(sum).or_default().push(s);
            }
        }
        if small == 0 {
            return table.contains_key(&0);
        }
        for s in k_subsets(&idx, small) {
            let Some(target) = checked_sum(&q.values, &s).and_then(|v| v.checked_neg()) else {
                continue;
            };
            if let Some(halves) = table.get(&target) {
                let used: HashSet<usize> = s.iter().copied().collect();
                if halves.iter().any(|h| h.iter().all(|i| !used.contains(i))) {
                    return true;
                }
            }
        }
        false
    }
}

/// Oracle over the zero-sum k-subsets of a [`KSumInstance`].
#[derive(Debug, Clone)]
pub struct KSumOracle<D> {
    inst: KSumInstance,
    /// `encoded[i][v] = f_{i+1}(values[v])`.
    encoded: Vec<Vec<i128>>,
    decider: D,
}

pub fn ksum_oracle<D: Decider<SumQuery>>(inst: KSumInstance, decider: D) -> Result<KSumOracle<D>> {
    let k = inst.k;
    let encoded = (1..=k)
        .map(|i| inst.values.iter().map(|&x| ksum_encode(i, k, x as i128)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(KSumOracle { inst, encoded, decider })
}

impl<D> KSumOracle<D> {
    pub fn instance(&self) -> &KSumInstance {
        &self.inst
    }
}

impl<D: Decider<SumQuery>> IndependenceOracle for KSumOracle<D> {
    fn vertex_count(&self) -> usize {
        self.inst.values.len()
    }

    fn arity(&self) -> usize {
        self.inst.k
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        if trivially_independent(classes, self.inst.k)? {
            return Ok(Answer::Independent);
        }
        let values = classes
            .iter()
            .enumerate()
            .flat_map(|(i, class)| class.iter().map(move |&v| self.encoded[i][v]))
            .collect();
        let q = SumQuery { values, k: self.inst.k };
        Ok(Answer::from_has_edge(self.decider.decide(&q)))
    }

    fn failure_probability(&self) -> f64 {
        self.decider.failure_probability()
    }
}
