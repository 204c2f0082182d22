//! Truth engines for the estimator claims.
//!
//! Two independent routes certify unbiasedness. [`exact_expectation`]
//! enumerates every outcome of a finite discrete law and computes the
//! estimator's expectation exactly; [`run_bias_experiment`] and friends
//! draw seeded Monte Carlo replicates and report empirical bias with its
//! standard error. The exact engine is the hard oracle at desk scale, the
//! sampled engine covers continuous laws and variance comparisons.

mod distribution;
mod enumerate;
mod experiment;

pub use distribution::{parse_distribution, DistributionSpec, PROBABILITY_SUM_TOL};
pub use enumerate::{exact_expectation, ENUMERATION_CAP};
pub use experiment::{
    paired_variance_comparison, run_bias_experiment, run_variance_comparison, target_moment,
    theoretical_expectation, ExperimentResult, PairedVarianceComparison, MIN_EXPERIMENT_REPS,
};
