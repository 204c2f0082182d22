//! Exact expectations over finite discrete laws.

use crate::error::{Error, Result};
use crate::estimators::Estimator;
use crate::numeric::CompensatedSum;
use crate::verify::distribution::DistributionSpec;

/// Largest number of outcomes `support_size^n` the engine will enumerate.
pub const ENUMERATION_CAP: u64 = 1_000_000;

/// Exact expectation of an estimator over all `support^n` outcomes.
///
/// This is an exact weighted sum, not a sample: every outcome tuple is
/// visited once and contributes `P(outcome) * estimator(outcome)`. Only
/// discrete laws are accepted; bias for continuous laws is certified
/// statistically by the experiment harness instead.
pub fn exact_expectation(
    dist: &DistributionSpec,
    n: usize,
    estimator: &Estimator,
) -> Result<f64> {
    let DistributionSpec::Discrete { values, probs } = dist else {
        return Err(Error::EnumerationRequiresDiscrete);
    };
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let support = values.len();
    let outcomes = (support as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if outcomes > ENUMERATION_CAP as u128 {
        return Err(Error::EnumerationCapExceeded {
            outcomes,
            cap: ENUMERATION_CAP,
        });
    }
    estimator.validate_for(n)?;

    let mut indices = vec![0usize; n];
    let mut outcome = vec![values[0]; n];
    let mut acc = CompensatedSum::new();
    loop {
        let mut probability = 1.0;
        for (slot, &i) in outcome.iter_mut().zip(indices.iter()) {
            *slot = values[i];
            probability *= probs[i];
        }
        acc.add(probability * estimator.evaluate_slice(&outcome));

        // mixed-radix odometer, rightmost position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(acc.value());
            }
            pos -= 1;
            indices[pos] += 1;
            if indices[pos] < support {
                break;
            }
            indices[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{coeffs_half_sample, coeffs_third_family, Estimator};
    use approx::assert_relative_eq;

    fn bernoulli_half() -> DistributionSpec {
        DistributionSpec::discrete(vec![0.0, 1.0], vec![0.5, 0.5]).unwrap()
    }

    fn asymmetric_two_point() -> DistributionSpec {
        DistributionSpec::discrete(vec![0.0, 3.0], vec![2.0 / 3.0, 1.0 / 3.0]).unwrap()
    }

    #[test]
    fn bernoulli_aauv_expectation_is_sigma2() {
        let est = Estimator::aauv(coeffs_half_sample(4).unwrap()).unwrap();
        let expectation = exact_expectation(&bernoulli_half(), 4, &est).unwrap();
        assert_relative_eq!(expectation, 0.25, max_relative = 1e-12);
    }

    #[test]
    fn engine_matches_independent_enumeration() {
        // oracle: loop over all 16 Bernoulli outcomes with plain arithmetic
        let weights = [0.5, 0.5, 0.0, 0.0];
        let mut oracle = 0.0;
        for bits in 0..16u32 {
            let outcome: Vec<f64> = (0..4).map(|i| ((bits >> i) & 1) as f64).collect();
            let adjusted: f64 = outcome
                .iter()
                .zip(weights.iter())
                .map(|(x, w)| x * w)
                .sum();
            let ss: f64 = outcome.iter().map(|x| (x - adjusted) * (x - adjusted)).sum();
            oracle += (ss / 4.0) / 16.0;
        }
        assert_relative_eq!(oracle, 0.25, max_relative = 1e-14);

        let est = Estimator::aauv(coeffs_half_sample(4).unwrap()).unwrap();
        let expectation = exact_expectation(&bernoulli_half(), 4, &est).unwrap();
        assert_relative_eq!(expectation, oracle, max_relative = 1e-13);
    }

    #[test]
    fn point_mass_expectation_is_zero() {
        let point = DistributionSpec::point_mass(5.0).unwrap();
        for est in [
            Estimator::naive(),
            Estimator::unbiased(),
            Estimator::aauv(coeffs_half_sample(4).unwrap()).unwrap(),
        ] {
            assert_eq!(exact_expectation(&point, 4, &est).unwrap(), 0.0);
        }
    }

    #[test]
    fn third_moment_expectation_hits_mu3() {
        let est = Estimator::third_moment(coeffs_third_family(1, 2).unwrap()).unwrap();
        let expectation = exact_expectation(&asymmetric_two_point(), 4, &est).unwrap();
        assert_relative_eq!(expectation, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn naive_negative_control() {
        // the engine must detect the (n-1)/n bias of the naive estimator
        let est = Estimator::naive();
        let expectation = exact_expectation(&bernoulli_half(), 3, &est).unwrap();
        assert_relative_eq!(expectation, (2.0 / 3.0) * 0.25, max_relative = 1e-12);
    }

    #[test]
    fn interpolated_expectation_is_sigma2_along_lambda() {
        for lambda in [0.0, 0.7, 1.0] {
            let est =
                Estimator::interpolated(coeffs_half_sample(4).unwrap(), lambda).unwrap();
            let expectation = exact_expectation(&asymmetric_two_point(), 4, &est).unwrap();
            assert_relative_eq!(expectation, 2.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_continuous_and_oversized_inputs() {
        let normal = DistributionSpec::normal(0.0, 1.0).unwrap();
        assert!(matches!(
            exact_expectation(&normal, 4, &Estimator::naive()),
            Err(Error::EnumerationRequiresDiscrete)
        ));
        // 2^21 outcomes exceed the 1e6 cap
        assert!(matches!(
            exact_expectation(&bernoulli_half(), 21, &Estimator::naive()),
            Err(Error::EnumerationCapExceeded { .. })
        ));
    }
}
