//! Unbiased variance estimation with denominator N.
//!
//! The standard unbiased variance divides by N - 1. This crate implements
//! the alternative: keep the denominator at N and adjust the mean
//! estimator instead, using weight vectors that satisfy simple feasibility
//! conditions. It provides:
//!
//! - the estimator families themselves ([`estimators`]): the
//!   average-adjusted variance, the interpolated family covering every
//!   denominator from N - 1 upward, a third-moment extension, and the
//!   closed-form and random coefficient constructions;
//! - permutation symmetrization ([`symmetry`]): exact and sampled engines
//!   showing that averaging any of these order-sensitive estimators over
//!   input permutations recovers the standard unbiased variance;
//! - verification engines ([`verify`]): exact expectations by enumeration
//!   over finite discrete laws, and a seeded, thread-count-independent
//!   Monte Carlo harness for bias and variance comparisons.
//!
//! Everything is deterministic given its inputs; randomized routines take
//! explicit 64-bit seeds (see [`rng`] for the stream derivation).
//!
//! ```
//! use aauv::estimators::{aauv, coeffs_m_block, unbiased_variance, Sample};
//! use aauv::symmetry::permutation_average_exact;
//!
//! let x = Sample::new(vec![1.0, 2.0, 4.0])?;
//! let c = coeffs_m_block(3, 1)?;
//!
//! // denominator N, still unbiased
//! let adjusted = aauv(&x, &c)?.estimate();
//! assert!(adjusted > 0.0);
//!
//! // averaging over all 3! orderings recovers s^2
//! let q = permutation_average_exact(&x, &c)?;
//! assert!((q.q - unbiased_variance(&x)?.estimate()).abs() < 1e-10);
//! # Ok::<(), aauv::Error>(())
//! ```

pub mod error;
pub mod estimators;
pub mod numeric;
pub mod rng;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use estimators::{
    CoefficientVector, EstimateReport, Estimator, EstimatorDescriptor, EstimatorId, MomentOrder,
    Sample, DEFAULT_FEASIBILITY_TOL,
};
pub use symmetry::{AverageMode, PermutationAverageResult, EXACT_PERMUTATION_CAP};
pub use verify::{DistributionSpec, ExperimentResult, PairedVarianceComparison};
