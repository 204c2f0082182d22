//! Permutation averaging of the order-sensitive estimators.
//!
//! The average-adjusted estimators attach fixed weights to fixed sample
//! positions, so permuting the observations changes the estimate. Averaging
//! over all N! permutations recovers the standard unbiased variance
//! exactly, both for the adjusted estimator itself and for every
//! interpolated variant regardless of lambda. The exact engine enumerates
//! permutations in lexicographic order; the sampled engine averages over
//! seeded Fisher-Yates shuffles for sample sizes where N! is out of reach.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{
    aauv_value, interpolated_variance_value, require_order2_feasible, unbiased_variance_value,
    CoefficientVector, Sample, DEFAULT_FEASIBILITY_TOL,
};
use crate::numeric::CompensatedSum;
use crate::rng::replicate_rng;

/// Largest N for which exact enumeration is allowed (8! = 40320 terms).
pub const EXACT_PERMUTATION_CAP: usize = 8;

/// Replicates per accumulation chunk in sampled mode. Fixed so that the
/// merge structure, and therefore the result, is independent of how many
/// worker threads execute the chunks.
const SAMPLED_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AverageMode {
    Exact,
    Sampled,
}

/// Outcome of a permutation average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationAverageResult {
    /// The permutation average of the estimator.
    pub q: f64,
    pub mode: AverageMode,
    /// N! in exact mode, the replicate count in sampled mode.
    pub permutations_used: u64,
    /// Standard error of the mean; sampled mode only.
    pub stderr: Option<f64>,
    /// The standard unbiased variance of the same sample.
    pub reference_s2: f64,
}

/// Advances `perm` to its lexicographic successor; false once exhausted.
fn next_lexicographic(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn validate_common(x: &Sample, c: &CoefficientVector) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::DegenerateSample { n: x.len() });
    }
    if x.len() != c.len() {
        return Err(Error::LengthMismatch {
            sample_len: x.len(),
            coeff_len: c.len(),
        });
    }
    require_order2_feasible(c, DEFAULT_FEASIBILITY_TOL)
}

fn exact_average<F>(x: &Sample, eval: F) -> PermutationAverageResult
where
    F: Fn(&[f64]) -> f64,
{
    let values = x.values();
    let n = values.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut scratch = vec![0.0; n];
    let mut acc = CompensatedSum::new();
    let mut count = 0u64;
    loop {
        for (slot, &idx) in scratch.iter_mut().zip(perm.iter()) {
            *slot = values[idx];
        }
        acc.add(eval(&scratch));
        count += 1;
        if !next_lexicographic(&mut perm) {
            break;
        }
    }
    PermutationAverageResult {
        q: acc.value() / count as f64,
        mode: AverageMode::Exact,
        permutations_used: count,
        stderr: None,
        reference_s2: unbiased_variance_value(values),
    }
}

/// Exact permutation average of the average-adjusted variance.
///
/// Enumerates all N! orderings of the sample; the result equals the
/// standard unbiased variance up to accumulation error.
pub fn permutation_average_exact(
    x: &Sample,
    c: &CoefficientVector,
) -> Result<PermutationAverageResult> {
    validate_common(x, c)?;
    if x.len() > EXACT_PERMUTATION_CAP {
        return Err(Error::PermutationCapExceeded {
            n: x.len(),
            cap: EXACT_PERMUTATION_CAP,
        });
    }
    let weights = c.weights().to_vec();
    Ok(exact_average(x, |values| aauv_value(values, &weights)))
}

/// Exact permutation average of the interpolated variance at `lambda`.
///
/// Equals the standard unbiased variance for every lambda.
pub fn permutation_average_lambda_exact(
    x: &Sample,
    c: &CoefficientVector,
    lambda: f64,
) -> Result<PermutationAverageResult> {
    validate_common(x, c)?;
    if !lambda.is_finite() {
        return Err(Error::NonFiniteLambda { lambda });
    }
    if x.len() > EXACT_PERMUTATION_CAP {
        return Err(Error::PermutationCapExceeded {
            n: x.len(),
            cap: EXACT_PERMUTATION_CAP,
        });
    }
    let weights = c.weights().to_vec();
    Ok(exact_average(x, |values| {
        interpolated_variance_value(values, &weights, lambda)
    }))
}

/// Monte Carlo permutation average over `reps` seeded Fisher-Yates
/// shuffles.
///
/// `lambda = None` averages the average-adjusted variance, `Some(l)` the
/// interpolated variance at `l`. Replicate `r` shuffles with its own
/// derived stream, and partial sums merge in fixed chunk order, so the
/// result is bit-identical for a fixed seed no matter how many threads
/// run the chunks.
pub fn permutation_average_sampled(
    x: &Sample,
    c: &CoefficientVector,
    lambda: Option<f64>,
    reps: u64,
    seed: u64,
) -> Result<PermutationAverageResult> {
    validate_common(x, c)?;
    if let Some(l) = lambda {
        if !l.is_finite() {
            return Err(Error::NonFiniteLambda { lambda: l });
        }
    }
    if reps < 2 {
        return Err(Error::TooFewPermutationReps { reps });
    }

    let values = x.values();
    let weights = c.weights();
    let reference_s2 = unbiased_variance_value(values);
    let eval = |permuted: &[f64]| match lambda {
        None => aauv_value(permuted, weights),
        Some(l) => interpolated_variance_value(permuted, weights, l),
    };

    let chunk_count = reps.div_ceil(SAMPLED_CHUNK);
    let partials: Vec<(CompensatedSum, CompensatedSum)> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * SAMPLED_CHUNK;
            let end = ((chunk + 1) * SAMPLED_CHUNK).min(reps);
            let mut scratch = values.to_vec();
            let mut dev = CompensatedSum::new();
            let mut dev_sq = CompensatedSum::new();
            for replicate in start..end {
                let mut rng = replicate_rng(seed, replicate);
                scratch.copy_from_slice(values);
                scratch.shuffle(&mut rng);
                // accumulate deviations from s^2: the values cluster there,
                // so the variance sum stays well conditioned
                let d = eval(&scratch) - reference_s2;
                dev.add(d);
                dev_sq.add(d * d);
            }
            (dev, dev_sq)
        })
        .collect();

    let mut dev = CompensatedSum::new();
    let mut dev_sq = CompensatedSum::new();
    for (d, d2) in &partials {
        dev.merge(d);
        dev_sq.merge(d2);
    }

    let mean_dev = dev.value() / reps as f64;
    let sample_var =
        ((dev_sq.value() - dev.value() * mean_dev) / (reps - 1) as f64).max(0.0);
    Ok(PermutationAverageResult {
        q: reference_s2 + mean_dev,
        mode: AverageMode::Sampled,
        permutations_used: reps,
        stderr: Some((sample_var / reps as f64).sqrt()),
        reference_s2,
    })
}
