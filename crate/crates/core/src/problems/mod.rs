//! Reductions from concrete witness problems to coloured independence
//! oracles, together with the deciders that answer their queries.
//!
//! Each adapter exposes the natural witness hypergraph of its instance: one
//! vertex per element, one edge per witness. A query with classes
//! `X_1, ..., X_k` is translated into a smaller instance of the same problem
//! and handed to a [`Decider`].

mod clique;
mod colourful;
mod kov;
mod ksum;
mod majority;

pub use clique::{
    exact_weight_clique_oracle, CliqueBruteForce, CliqueQuery, ExactWeightCliqueOracle, WeightedGraph,
};
pub use colourful::{
    automorphism_count, colourful_h_oracle, count_colourful_h, ColourfulBruteForce, ColourfulHOracle,
    ColourfulQuery, PatternInstance, SimpleGraph,
};
pub use kov::{kov_oracle, KovInstance, KovOracle, OvBruteForce, OvQuery};
pub use ksum::{ksum_encode, ksum_oracle, KSumInstance, KSumOracle, SumBruteForce, SumMeetInMiddle, SumQuery};
pub use majority::{majority_vote_oracle, MajorityVote};

use crate::error::{invalid, Result};
use crate::hypergraph::ColourClasses;

/// A decision procedure for one problem, fed queries of type `Q`.
pub trait Decider<Q: ?Sized>: Send + Sync {
    /// `true` for Yes.
    fn decide(&self, query: &Q) -> bool;

    /// Probability that one call answers wrongly; 0 for exact deciders.
    fn failure_probability(&self) -> f64 {
        0.0
    }
}

impl<Q: ?Sized, D: Decider<Q> + ?Sized> Decider<Q> for Box<D> {
    fn decide(&self, query: &Q) -> bool {
        (**self).decide(query)
    }
    fn failure_probability(&self) -> f64 {
        (**self).failure_probability()
    }
}

/// Checks the class count; `Ok(true)` when some class is empty, in which
/// case no colourful witness can exist.
fn trivially_independent(classes: &ColourClasses, k: usize) -> Result<bool> {
    if classes.len() != k {
        return Err(invalid(format!("expected {k} classes, got {}", classes.len())));
    }
    Ok(classes.iter().any(|c| c.is_empty()))
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..k).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..k).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_counts() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(permutations(3).len(), 6);
        assert_eq!(permutations(5).len(), 120);
        let p = permutations(4);
        assert!(p.windows(2).all(|w| w[0] < w[1]));
    }
}
