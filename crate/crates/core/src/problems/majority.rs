//! Error reduction for randomized oracles by repeated querying.

use crate::error::{invalid, Result};
use crate::hypergraph::ColourClasses;
use crate::numeric::binomial;
use crate::oracle::{Answer, IndependenceOracle};

/// Answers each query with the most common of `reps` inner answers.
#[derive(Debug, Clone)]
pub struct MajorityVote<O> {
    inner: O,
    reps: usize,
}

/// `reps` must be odd so that ties cannot occur.
pub fn majority_vote_oracle<O: IndependenceOracle>(inner: O, reps: usize) -> Result<MajorityVote<O>> {
    if reps.is_multiple_of(2) {
        return Err(invalid(format!("majority vote needs an odd repetition count, got {reps}")));
    }
    Ok(MajorityVote { inner, reps })
}

impl<O> MajorityVote<O> {
    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn reps(&self) -> usize {
        self.reps
    }
}

impl<O: IndependenceOracle> IndependenceOracle for MajorityVote<O> {
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    fn arity(&self) -> usize {
        self.inner.arity()
    }

    fn query(&self, classes: &ColourClasses) -> Result<Answer> {
        let mut yes = 0;
        for _ in 0..self.reps {
            yes += self.inner.query(classes)?.has_edge() as usize;
        }
        Ok(Answer::from_has_edge(2 * yes > self.reps))
    }

    /// Probability that more than half of the inner answers are wrong.
    fn failure_probability(&self) -> f64 {
        let p = self.inner.failure_probability();
        if p == 0.0 {
            return 0.0;
        }
        let r = self.reps as u64;
        ((r / 2 + 1)..=r)
            .map(|j| binomial(r, j) * p.powi(j as i32) * (1.0 - p).powi((r - j) as i32))
            .sum()
    }

    fn decider_calls_per_query(&self) -> u64 {
        self.reps as u64 * self.inner.decider_calls_per_query()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::oracle::RunStats;
    use crate::random::{seeded, StreamRng};
    use rand::Rng;
    use std::sync::Mutex;

    /// Flips the true answer with probability `p`.
    struct Noisy {
        g: Hypergraph,
        p: f64,
        rng: Mutex<StreamRng>,
    }

    impl IndependenceOracle for Noisy {
        fn vertex_count(&self) -> usize {
            self.g.vertex_count()
        }
        fn arity(&self) -> usize {
            self.g.arity()
        }
        fn query(&self, classes: &ColourClasses) -> Result<Answer> {
            let truth = self.g.query(classes)?.has_edge();
            let flip = self.rng.lock().unwrap().random::<f64>() < self.p;
            Ok(Answer::from_has_edge(truth ^ flip))
        }
        fn failure_probability(&self) -> f64 {
            self.p
        }
    }

    #[test]
    fn even_reps_rejected() {
        let g = Hypergraph::complete(3, 2).unwrap();
        assert!(majority_vote_oracle(&g, 4).is_err());
        assert!(majority_vote_oracle(&g, 0).is_err());
    }

    #[test]
    fn deterministic_inner_is_unchanged() {
        let g = Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap();
        for reps in [1, 3, 7] {
            let m = majority_vote_oracle(&g, reps).unwrap();
            for q in [vec![vec![0], vec![1]], vec![vec![2], vec![3]]] {
                let q = ColourClasses::new(q, 4).unwrap();
                assert_eq!(m.query(&q).unwrap(), g.query(&q).unwrap());
            }
            assert_eq!(m.failure_probability(), 0.0);
        }
    }

    #[test]
    fn amplifies_noisy_oracle() {
        let noisy = Noisy {
            g: Hypergraph::new(4, 2, vec![vec![0, 1]]).unwrap(),
            p: 0.3,
            rng: Mutex::new(seeded(4)),
        };
        let m = majority_vote_oracle(&noisy, 21).unwrap();
        assert!(m.failure_probability() < 0.05);
        let mut st = RunStats::new();
        let yes = ColourClasses::new(vec![vec![0], vec![1]], 4).unwrap();
        let no = ColourClasses::new(vec![vec![2], vec![3]], 4).unwrap();
        let mut errors = 0;
        for i in 0..1000 {
            let (q, truth) = if i % 2 == 0 { (&yes, true) } else { (&no, false) };
            errors += (st.ask(&m, q).unwrap().has_edge() != truth) as usize;
        }
        assert!(errors <= 50, "{errors} errors");
        assert_eq!(st.oracle_queries, 1000);
        assert_eq!(st.decider_calls, 21_000);
    }
}
