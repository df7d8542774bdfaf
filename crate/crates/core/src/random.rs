//! Seeded sampling primitives.
//!
//! All randomness in the estimators flows from a caller-supplied `Rng`.
//! Independent sub-runs get their own ChaCha stream, derived from a word
//! drawn off the parent plus the sub-run index, so that repeated runs can
//! be scheduled in any order (or in parallel) without changing results.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// The generator type used for derived streams and by the CLI.
pub type StreamRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

/// Stream `index` of the family keyed by `key`.
pub fn stream(key: u64, index: u64) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

/// Uniformly random `m`-subset of `set`, returned sorted.
pub fn random_fixed_subset<R: Rng + ?Sized>(rng: &mut R, set: &[usize], m: usize) -> Result<Vec<usize>> {
    if m > set.len() {
        return Err(invalid(format!(
            "cannot draw {m} elements from a set of {}",
            set.len()
        )));
    }
    let mut out: Vec<usize> = index::sample(rng, set.len(), m)
        .into_iter()
        .map(|i| set[i])
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Keeps each element independently with probability exactly `2^-j`: an
/// element survives when its `j` fresh random bits are all zero. Bits are
/// taken `j` at a time from 64-bit words.
pub fn bernoulli_subset<R: Rng + ?Sized>(rng: &mut R, set: &[usize], j: u32) -> Result<Vec<usize>> {
    if j > 63 {
        return Err(Error::UnsupportedParameter(format!(
            "inclusion exponent {j} exceeds 63"
        )));
    }
    if j == 0 {
        return Ok(set.to_vec());
    }
    let mask = (1u64 << j) - 1;
    let mut word = 0u64;
    let mut bits = 0u32;
    let mut out = Vec::with_capacity(set.len() >> (j - 1));
    for &v in set {
        if bits < j {
            word = rng.random();
            bits = 64;
        }
        if word & mask == 0 {
            out.push(v);
        }
        word >>= j;
        bits -= j;
    }
    Ok(out)
}

/// Uniform colouring `V -> [k]`, returned as the `k` colour classes.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut classes = vec![Vec::new(); k];
    for v in 0..n {
        classes[rng.random_range(0..k)].push(v);
    }
    classes
}
