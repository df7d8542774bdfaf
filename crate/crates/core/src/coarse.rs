//! Coarse edge-count estimation to within a polylogarithmic factor.
//!
//! [`verify_guess`] is a one-sided gap tester for k-partite inputs,
//! [`colour_coarse`] turns it into an estimate by scanning power-of-two
//! guesses, [`helper_coarse`] lifts that to arbitrary inputs by colour
//! coding, and [`coarse`] amplifies by taking a median.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::hypergraph::ColourClasses;
use crate::numeric::{exact_log2, factorial, median};
use crate::oracle::{IndependenceOracle, RunStats};
use crate::profile::ConstantsProfile;
use crate::random::{bernoulli_subset, random_partition};

#[derive(Debug, Clone, PartialEq)]
pub struct CoarseParams {
    pub n: usize,
    pub k: usize,
    pub log_n: u32,
    /// Completeness probability of a single guess check.
    pub p_out: f64,
    /// VerifyGuess repetitions per guess.
    pub reps: u64,
    pub gamma: f64,
    /// Output factor applied to the selected guess.
    pub scale: f64,
    /// Approximation ratio of ColourCoarse.
    pub b: f64,
}

impl CoarseParams {
    pub fn new(n: usize, k: usize, profile: &ConstantsProfile) -> Result<Self> {
        let log_n = exact_log2(n)
            .filter(|&l| l >= 1)
            .ok_or_else(|| invalid(format!("vertex count {n} is not a power of two >= 2")))?;
        let kf = k as f64;
        let kl = kf * log_n as f64;
        let p_out = (8.0 * kl).powi(-(k as i32));
        let reps_formula = (48.0 * (6.0 * kl).ln() / p_out).ceil();
        Ok(CoarseParams {
            n,
            k,
            log_n,
            p_out,
            reps: profile.colour_coarse_reps.apply(reps_formula),
            gamma: p_out / (2.0 * kl.powi(k as i32)),
            scale: (p_out / (2.0 * kl.powi(k as i32))).sqrt(),
            b: (4.0 * kl).powi(k as i32),
        })
    }

    /// Largest inclusion exponent, `k log n`.
    pub fn depth(&self) -> u32 {
        self.k as u32 * self.log_n
    }

    /// Passing threshold on the number of Yes answers for one guess.
    pub fn threshold(&self) -> f64 {
        0.75 * self.p_out * self.reps as f64
    }

    /// Upper bound on queries made by one ColourCoarse call.
    pub fn query_bound(&self) -> u64 {
        let d = self.depth() as u64 + 1;
        d.pow(self.k as u32 + 1) * self.reps + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
}

/// Tests whether the k-partite graph induced by `classes` has at least about
/// `guess` edges.
///
/// Subsets `Y[i][j]` of each class are drawn once, each vertex kept with
/// probability `2^-j`, and reused across every exponent tuple; tuples are
/// scanned in lexicographic order and the first non-independent one halts
/// with Yes. Tuples with an empty subset are known to be independent and
/// are not sent to the oracle.
pub fn verify_guess<O, R>(
    oracle: &O,
    guess: u64,
    classes: &ColourClasses,
    params: &CoarseParams,
    rng: &mut R,
    stats: &mut RunStats,
) -> Result<Verdict>
where
    O: IndependenceOracle + ?Sized,
    R: Rng + ?Sized,
{
    let log_guess = exact_log2(guess as usize)
        .filter(|_| guess > 0)
        .ok_or_else(|| invalid(format!("guess {guess} is not a power of two")))?;
    let k = params.k;
    if classes.len() != k {
        return Err(invalid(format!("expected {k} classes, got {}", classes.len())));
    }
    let depth = params.depth();
    let mut subsets: Vec<Vec<Vec<usize>>> = Vec::with_capacity(k);
    for class in classes {
        let mut per_class = Vec::with_capacity(depth as usize + 1);
        for j in 0..=depth {
            per_class.push(bernoulli_subset(rng, class, j)?);
        }
        subsets.push(per_class);
    }

    let mut tuple = vec![0u32; k];
    let mut query = ColourClasses::from_disjoint(vec![Vec::new(); k]);
    loop {
        let sum: u32 = tuple.iter().sum();
        if sum >= log_guess && tuple.iter().enumerate().all(|(i, &a)| !subsets[i][a as usize].is_empty()) {
            for (i, &a) in tuple.iter().enumerate() {
                let class = query.class_mut(i);
                class.clear();
                class.extend_from_slice(&subsets[i][a as usize]);
            }
            if stats.ask(oracle, &query)?.has_edge() {
                return Ok(Verdict::Yes);
            }
        }
        // Lexicographic successor in [0, depth]^k.
        let mut pos = k;
        loop {
            if pos == 0 {
                return Ok(Verdict::No);
            }
            pos -= 1;
            if tuple[pos] < depth {
                tuple[pos] += 1;
                for a in &mut tuple[pos + 1..] {
                    *a = 0;
                }
                break;
            }
        }
    }
}

/// Coarse estimate of the number of edges with one vertex in each class.
///
/// Returns `m * scale`, where `m` is the least power-of-two guess whose
/// VerifyGuess Yes-count falls below the passing threshold (or `n^k` when
/// none does), and 0 when the classes span no edge at all. Guesses are
/// scanned in increasing order and the scan stops at the first failing
/// one; a guess's repetitions stop as soon as its outcome is decided.
pub fn colour_coarse<O, R>(
    oracle: &O,
    classes: &ColourClasses,
    params: &CoarseParams,
    rng: &mut R,
    stats: &mut RunStats,
) -> Result<f64>
where
    O: IndependenceOracle + ?Sized,
    R: Rng + ?Sized,
{
    if !stats.ask(oracle, classes)?.has_edge() {
        return Ok(0.0);
    }
    let threshold = params.threshold();
    let max_exp = params.depth();
    let mut chosen = max_exp;
    'guesses: for exp in 0..=max_exp {
        let guess = 1u64 << exp;
        let mut yes = 0u64;
        for run in 0..params.reps {
            if verify_guess(oracle, guess, classes, params, rng, stats)? == Verdict::Yes {
                yes += 1;
            }
            if yes as f64 >= threshold {
                continue 'guesses;
            }
            let remaining = params.reps - run - 1;
            if ((yes + remaining) as f64) < threshold {
                break;
            }
        }
        chosen = exp;
        break;
    }
    Ok(2f64.powi(chosen as i32) * params.scale)
}

/// Colour-coding lift of [`colour_coarse`] to general k-hypergraphs.
pub fn helper_coarse<O, R>(
    oracle: &O,
    params: &CoarseParams,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<f64>
where
    O: IndependenceOracle + ?Sized,
    R: Rng + ?Sized,
{
    let k = params.k;
    let t_formula = (3.0 * (2.0 * k as f64).exp()).ceil();
    let colourings = profile.colourings.apply(t_formula);
    let rounds = profile
        .colouring_rounds
        .apply((72.0 * t_formula.ln()).ceil() + 3.0);
    let mut total = 0.0;
    let mut outputs = Vec::with_capacity(rounds as usize);
    for _ in 0..colourings {
        let classes = ColourClasses::from_disjoint(random_partition(rng, params.n, k));
        outputs.clear();
        for _ in 0..rounds {
            outputs.push(colour_coarse(oracle, &classes, params, rng, stats)?);
        }
        total += median(&mut outputs);
    }
    let kf = k as f64;
    Ok(kf.powi(k as i32) / (colourings as f64 * factorial(k)) * total)
}

/// Estimate of `e(G)` within a factor `2 (4k log n)^k`, with failure
/// probability at most `delta` under the paper profile.
pub fn coarse<O, R>(
    oracle: &O,
    delta: f64,
    rng: &mut R,
    profile: &ConstantsProfile,
    stats: &mut RunStats,
) -> Result<f64>
where
    O: IndependenceOracle + ?Sized,
    R: Rng + ?Sized,
{
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} outside (0, 1)")));
    }
    stats.coarse_calls += 1;
    let n = oracle.vertex_count();
    let k = oracle.arity();
    if n < k {
        return Ok(0.0);
    }
    let params = CoarseParams::new(n, k, profile)?;
    let rounds = profile.coarse_rounds.apply((36.0 * (2.0 / delta).ln()).ceil());
    let mut outputs = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        outputs.push(helper_coarse(oracle, &params, rng, profile, stats)?);
    }
    Ok(median(&mut outputs))
}
