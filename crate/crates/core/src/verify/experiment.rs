//! Seeded Monte Carlo experiments over estimators.
//!
//! Replicate `r` always draws its sample from the stream derived from
//! `(seed, r)`, and per-chunk partial sums merge in fixed chunk order, so
//! every result here is a pure function of the inputs: rerunning with the
//! same seed is bit-identical regardless of thread count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{Estimator, EstimatorDescriptor, MomentOrder};
use crate::numeric::CompensatedSum;
use crate::rng::replicate_rng;
use crate::verify::distribution::DistributionSpec;

/// Minimum replicate count for a bias experiment.
pub const MIN_EXPERIMENT_REPS: u64 = 100;

/// Replicates per accumulation chunk; fixed so results are independent of
/// worker count.
const CHUNK: u64 = 4096;

/// Empirical summary of one estimator across replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub estimator: EstimatorDescriptor,
    pub n: usize,
    pub reps: u64,
    pub seed: u64,
    /// The true moment the estimator is aimed at (sigma^2 or mu3).
    pub target_moment: f64,
    pub empirical_mean: f64,
    /// `empirical_mean - target_moment`.
    pub empirical_bias: f64,
    /// Sample standard deviation of the estimates over sqrt(reps).
    pub bias_stderr: f64,
    /// Sample variance of the estimates across replicates.
    pub estimator_variance: f64,
}

/// Paired comparison of the replicate-wise variance of two estimators
/// evaluated on common random numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedVarianceComparison {
    pub first: ExperimentResult,
    pub second: ExperimentResult,
    /// Paired estimate of `Var(first) - Var(second)`.
    pub variance_difference: f64,
    /// Standard error of the paired difference.
    pub difference_stderr: f64,
}

/// The moment an estimator targets under `dist`: the variance for all
/// order-2 forms (including the biased naive one), the third central
/// moment for the third-moment form.
pub fn target_moment(estimator: &Estimator, dist: &DistributionSpec) -> f64 {
    match estimator.moment_order() {
        MomentOrder::Two => dist.variance(),
        MomentOrder::Three => dist.third_central_moment(),
    }
}

/// The exact expected value of an estimator under `dist` at sample size
/// `n`. Matches the target moment for the unbiased forms; the naive
/// estimator's expectation is `(n-1)/n * sigma^2`.
pub fn theoretical_expectation(estimator: &Estimator, dist: &DistributionSpec, n: usize) -> f64 {
    use crate::estimators::EstimatorId;
    match estimator.id() {
        EstimatorId::Naive => (n as f64 - 1.0) / n as f64 * dist.variance(),
        EstimatorId::Unbiased | EstimatorId::Aauv | EstimatorId::Interpolated => dist.variance(),
        EstimatorId::ThirdMoment => dist.third_central_moment(),
    }
}

fn validate_experiment(
    n: usize,
    reps: u64,
    estimators: &[&Estimator],
) -> Result<()> {
    if reps < MIN_EXPERIMENT_REPS {
        return Err(Error::TooFewReps {
            reps,
            min: MIN_EXPERIMENT_REPS,
        });
    }
    if n < 2 {
        return Err(Error::ExperimentSampleTooSmall { n });
    }
    if estimators.is_empty() {
        return Err(Error::NoEstimators);
    }
    for estimator in estimators {
        estimator.validate_for(n)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Default)]
struct MomentAcc {
    dev: CompensatedSum,
    dev_sq: CompensatedSum,
}

impl MomentAcc {
    #[inline]
    fn push(&mut self, deviation: f64) {
        self.dev.add(deviation);
        self.dev_sq.add(deviation * deviation);
    }

    fn merge(&mut self, other: &MomentAcc) {
        self.dev.merge(&other.dev);
        self.dev_sq.merge(&other.dev_sq);
    }

    /// (mean deviation, sample variance of the deviations)
    fn finish(&self, reps: u64) -> (f64, f64) {
        let mean = self.dev.value() / reps as f64;
        let variance =
            ((self.dev_sq.value() - self.dev.value() * mean) / (reps - 1) as f64).max(0.0);
        (mean, variance)
    }
}

/// Shared replicate loop: per replicate, one sample drawn from the
/// derived stream and every estimator evaluated on it (common random
/// numbers). Deviations are taken against each estimator's target moment
/// to keep the variance sums well conditioned.
fn accumulate(
    dist: &DistributionSpec,
    n: usize,
    reps: u64,
    seed: u64,
    estimators: &[&Estimator],
    targets: &[f64],
) -> Vec<MomentAcc> {
    let chunk_count = reps.div_ceil(CHUNK);
    let partials: Vec<Vec<MomentAcc>> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = ((chunk + 1) * CHUNK).min(reps);
            let mut buffer = vec![0.0; n];
            let mut accs = vec![MomentAcc::default(); estimators.len()];
            for replicate in start..end {
                let mut rng = replicate_rng(seed, replicate);
                dist.sample_into(&mut rng, &mut buffer);
                for ((estimator, acc), target) in
                    estimators.iter().zip(accs.iter_mut()).zip(targets)
                {
                    acc.push(estimator.evaluate_slice(&buffer) - target);
                }
            }
            accs
        })
        .collect();

    let mut merged = vec![MomentAcc::default(); estimators.len()];
    for chunk_accs in &partials {
        for (into, from) in merged.iter_mut().zip(chunk_accs) {
            into.merge(from);
        }
    }
    merged
}

fn build_result(
    estimator: &Estimator,
    acc: &MomentAcc,
    n: usize,
    reps: u64,
    seed: u64,
    target: f64,
) -> ExperimentResult {
    let (bias, variance) = acc.finish(reps);
    ExperimentResult {
        estimator: estimator.descriptor(),
        n,
        reps,
        seed,
        target_moment: target,
        empirical_mean: target + bias,
        empirical_bias: bias,
        bias_stderr: (variance / reps as f64).sqrt(),
        estimator_variance: variance,
    }
}

/// Draws `reps` samples of size `n` and summarizes one estimator.
pub fn run_bias_experiment(
    dist: &DistributionSpec,
    n: usize,
    reps: u64,
    seed: u64,
    estimator: &Estimator,
) -> Result<ExperimentResult> {
    let estimators = [estimator];
    validate_experiment(n, reps, &estimators)?;
    let target = target_moment(estimator, dist);
    let accs = accumulate(dist, n, reps, seed, &estimators, &[target]);
    Ok(build_result(estimator, &accs[0], n, reps, seed, target))
}

/// Evaluates several estimators on identical replicate samples.
///
/// Sharing the draws makes the per-estimator results directly comparable;
/// the same estimator listed twice produces identical records.
pub fn run_variance_comparison(
    dist: &DistributionSpec,
    n: usize,
    reps: u64,
    seed: u64,
    estimators: &[Estimator],
) -> Result<Vec<ExperimentResult>> {
    let refs: Vec<&Estimator> = estimators.iter().collect();
    validate_experiment(n, reps, &refs)?;
    let targets: Vec<f64> = refs.iter().map(|e| target_moment(e, dist)).collect();
    let accs = accumulate(dist, n, reps, seed, &refs, &targets);
    Ok(refs
        .iter()
        .zip(accs.iter())
        .zip(targets.iter())
        .map(|((est, acc), &target)| build_result(est, acc, n, reps, seed, target))
        .collect())
}

/// Paired comparison of `Var(first) - Var(second)` on common random
/// numbers.
///
/// Per replicate the statistic is the difference of squared deviations
/// from the respective target moments; its mean estimates the variance
/// difference (exactly, for unbiased estimators) and its spread gives the
/// paired standard error.
pub fn paired_variance_comparison(
    dist: &DistributionSpec,
    n: usize,
    reps: u64,
    seed: u64,
    first: &Estimator,
    second: &Estimator,
) -> Result<PairedVarianceComparison> {
    let estimators = [first, second];
    validate_experiment(n, reps, &estimators)?;
    let target_first = target_moment(first, dist);
    let target_second = target_moment(second, dist);

    let chunk_count = reps.div_ceil(CHUNK);
    let partials: Vec<(MomentAcc, MomentAcc, MomentAcc)> = (0..chunk_count)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = ((chunk + 1) * CHUNK).min(reps);
            let mut buffer = vec![0.0; n];
            let mut acc_first = MomentAcc::default();
            let mut acc_second = MomentAcc::default();
            let mut acc_pair = MomentAcc::default();
            for replicate in start..end {
                let mut rng = replicate_rng(seed, replicate);
                dist.sample_into(&mut rng, &mut buffer);
                let d_first = first.evaluate_slice(&buffer) - target_first;
                let d_second = second.evaluate_slice(&buffer) - target_second;
                acc_first.push(d_first);
                acc_second.push(d_second);
                acc_pair.push(d_first * d_first - d_second * d_second);
            }
            (acc_first, acc_second, acc_pair)
        })
        .collect();

    let mut acc_first = MomentAcc::default();
    let mut acc_second = MomentAcc::default();
    let mut acc_pair = MomentAcc::default();
    for (a, b, p) in &partials {
        acc_first.merge(a);
        acc_second.merge(b);
        acc_pair.merge(p);
    }

    let (pair_mean, pair_variance) = acc_pair.finish(reps);
    Ok(PairedVarianceComparison {
        first: build_result(first, &acc_first, n, reps, seed, target_first),
        second: build_result(second, &acc_second, n, reps, seed, target_second),
        variance_difference: pair_mean,
        difference_stderr: (pair_variance / reps as f64).sqrt(),
    })
}
