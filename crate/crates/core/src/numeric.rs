//! Small numeric helpers shared by the estimators.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{invalid, Result};

/// Probability that a fixed k-set inside a set of size `2^y` survives into a
/// uniformly random subset of size `2^(y-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalProbability {
    pub exact: BigRational,
    pub value: f64,
}

/// `C(2^y - k, 2^(y-1) - k) / C(2^y, 2^(y-1))`, evaluated exactly as
/// `prod_{i<k} (N - i) / (2N - i)` with `N = 2^(y-1)`.
pub fn halving_survival_p(y: u32, k: usize) -> Result<SurvivalProbability> {
    if y == 0 || y > 63 {
        return Err(invalid(format!("level y = {y} must lie in 1..=63")));
    }
    let half = 1u64 << (y - 1);
    if (half as u128) < k as u128 {
        return Err(invalid(format!("2^(y-1) = {half} is smaller than k = {k}")));
    }
    let mut exact = BigRational::one();
    for i in 0..k as u64 {
        exact *= BigRational::new(BigInt::from(half - i), BigInt::from(2 * half - i));
    }
    let value = exact
        .to_f64()
        .ok_or_else(|| invalid("survival probability underflows f64"))?;
    Ok(SurvivalProbability { exact, value })
}

/// Base-2 logarithm of a power of two.
pub fn exact_log2(n: usize) -> Option<u32> {
    n.is_power_of_two().then(|| n.trailing_zeros())
}

/// Lower median: for an even count, the smaller of the two middle values.
/// Always one of the inputs.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty sample");
    values.sort_by(f64::total_cmp);
    values[(values.len() - 1) / 2]
}

pub fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc / (i + 1) as f64 * (n - i) as f64)
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}
