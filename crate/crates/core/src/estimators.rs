//! Variance and third-moment estimators built around adjusted mean
//! estimators.
//!
//! The usual unbiased variance divides the sum of squared deviations from
//! the sample mean by `N - 1`. The estimators here keep the denominator at
//! `N` and instead replace the sample mean by a weighted mean `sum(c[i] *
//! x[i])` whose weights satisfy the order-2 feasibility conditions
//! `sum(c) = 1` and `sum(c^2) = 2/N`. Any such weight vector yields an
//! unbiased variance estimator; the half-sample mean and the m-block
//! family are the two closed-form constructions, and
//! [`coeffs_random_feasible`] samples the remaining solutions uniformly.
//! Interpolating between the weighted mean and the sample mean produces an
//! unbiased estimator for every real `lambda`, with denominator
//! `N - 1 + lambda^2`. The same mean-adjustment idea extends to the third
//! central moment under the order-3 conditions.
//!
//! All operations are pure functions of immutable inputs and are safe to
//! call concurrently.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric;

/// Default absolute tolerance on both feasibility residuals.
///
/// The closed-form constructions are exact up to floating-point rounding;
/// 1e-9 admits accumulated rounding at N = 100 without admitting vectors
/// that are actually infeasible. Callers can override it through the
/// `*_with_tol` entry points.
pub const DEFAULT_FEASIBILITY_TOL: f64 = 1e-9;

/// Moment order a coefficient vector is declared for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentOrder {
    Two,
    Three,
}

impl MomentOrder {
    pub fn as_u8(self) -> u8 {
        match self {
            MomentOrder::Two => 2,
            MomentOrder::Three => 3,
        }
    }

    pub fn from_u8(value: u8) -> Option<Self> {
        match value {
            2 => Some(MomentOrder::Two),
            3 => Some(MomentOrder::Three),
            _ => None,
        }
    }
}

impl Serialize for MomentOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.as_u8())
    }
}

/// An ordered sample of finite real observations.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Validates that the sample is non-empty and every value is finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteSample { index, value });
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// A weight vector for an adjusted mean estimator, with its declared
/// moment order.
///
/// Construction validates finiteness only; feasibility is a separate
/// check so that infeasible vectors can still be inspected and reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientVector {
    order: MomentOrder,
    #[serde(rename = "c")]
    weights: Vec<f64>,
}

impl CoefficientVector {
    pub fn new(weights: Vec<f64>, order: MomentOrder) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyCoefficients);
        }
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteCoefficient { index, value });
            }
        }
        Ok(Self { order, weights })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn order(&self) -> MomentOrder {
        self.order
    }
}

/// Residuals of the order-2 feasibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Order2Residuals {
    /// `sum(c) - 1`
    pub sum: f64,
    /// `sum(c^2) - 2/N`
    pub sum_sq: f64,
}

impl Order2Residuals {
    pub fn within(&self, tol: f64) -> bool {
        self.sum.abs() <= tol && self.sum_sq.abs() <= tol
    }
}

/// Residuals of the order-3 feasibility conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Order3Residuals {
    /// `sum(c) - 1`
    pub sum: f64,
    /// `(3/N) * sum(c^2) - sum(c^3) - 3/N`
    pub k3: f64,
}

impl Order3Residuals {
    pub fn within(&self, tol: f64) -> bool {
        self.sum.abs() <= tol && self.k3.abs() <= tol
    }
}

/// Identity tag of an estimator form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorId {
    Naive,
    Unbiased,
    Aauv,
    Interpolated,
    ThirdMoment,
}

impl EstimatorId {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorId::Naive => "naive",
            EstimatorId::Unbiased => "unbiased",
            EstimatorId::Aauv => "aauv",
            EstimatorId::Interpolated => "interpolated",
            EstimatorId::ThirdMoment => "third_moment",
        }
    }
}

/// Result of a single estimator application: the estimate together with
/// the identity and parameters that produced it.
///
/// `lambda` is present exactly for the interpolated estimator and
/// `coefficients` exactly for the coefficient-bearing forms; the
/// constructors in this module enforce that.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    estimator_id: EstimatorId,
    estimate: f64,
    lambda: Option<f64>,
    coefficients: Option<CoefficientVector>,
    n: usize,
}

impl EstimateReport {
    pub fn estimator_id(&self) -> EstimatorId {
        self.estimator_id
    }

    pub fn estimate(&self) -> f64 {
        self.estimate
    }

    pub fn lambda(&self) -> Option<f64> {
        self.lambda
    }

    pub fn coefficients(&self) -> Option<&CoefficientVector> {
        self.coefficients.as_ref()
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Serializable echo of an estimator's identity and parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorDescriptor {
    pub id: EstimatorId,
    pub lambda: Option<f64>,
    pub coefficients: Option<CoefficientVector>,
}

/// A validated estimator descriptor that can be applied repeatedly.
///
/// Coefficient-bearing forms check feasibility once at construction, so
/// the evaluation hot path inside the verification engines carries no
/// per-call gate.
#[derive(Debug, Clone)]
pub struct Estimator {
    kind: EstimatorKind,
}

#[derive(Debug, Clone)]
enum EstimatorKind {
    Naive,
    Unbiased,
    Aauv(CoefficientVector),
    Interpolated(CoefficientVector, f64),
    ThirdMoment(CoefficientVector),
}

impl Estimator {
    pub fn naive() -> Self {
        Self {
            kind: EstimatorKind::Naive,
        }
    }

    pub fn unbiased() -> Self {
        Self {
            kind: EstimatorKind::Unbiased,
        }
    }

    pub fn aauv(coeffs: CoefficientVector) -> Result<Self> {
        Self::aauv_with_tol(coeffs, DEFAULT_FEASIBILITY_TOL)
    }

    pub fn aauv_with_tol(coeffs: CoefficientVector, tol: f64) -> Result<Self> {
        require_order2_feasible(&coeffs, tol)?;
        Ok(Self {
            kind: EstimatorKind::Aauv(coeffs),
        })
    }

    pub fn interpolated(coeffs: CoefficientVector, lambda: f64) -> Result<Self> {
        Self::interpolated_with_tol(coeffs, lambda, DEFAULT_FEASIBILITY_TOL)
    }

    pub fn interpolated_with_tol(coeffs: CoefficientVector, lambda: f64, tol: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFiniteLambda { lambda });
        }
        require_order2_feasible(&coeffs, tol)?;
        Ok(Self {
            kind: EstimatorKind::Interpolated(coeffs, lambda),
        })
    }

    pub fn third_moment(coeffs: CoefficientVector) -> Result<Self> {
        Self::third_moment_with_tol(coeffs, DEFAULT_FEASIBILITY_TOL)
    }

    pub fn third_moment_with_tol(coeffs: CoefficientVector, tol: f64) -> Result<Self> {
        require_order3_feasible(&coeffs, tol)?;
        Ok(Self {
            kind: EstimatorKind::ThirdMoment(coeffs),
        })
    }

    pub fn id(&self) -> EstimatorId {
        match self.kind {
            EstimatorKind::Naive => EstimatorId::Naive,
            EstimatorKind::Unbiased => EstimatorId::Unbiased,
            EstimatorKind::Aauv(_) => EstimatorId::Aauv,
            EstimatorKind::Interpolated(..) => EstimatorId::Interpolated,
            EstimatorKind::ThirdMoment(_) => EstimatorId::ThirdMoment,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match self.kind {
            EstimatorKind::Interpolated(_, lambda) => Some(lambda),
            _ => None,
        }
    }

    pub fn coefficients(&self) -> Option<&CoefficientVector> {
        match &self.kind {
            EstimatorKind::Aauv(c)
            | EstimatorKind::Interpolated(c, _)
            | EstimatorKind::ThirdMoment(c) => Some(c),
            _ => None,
        }
    }

    pub fn descriptor(&self) -> EstimatorDescriptor {
        EstimatorDescriptor {
            id: self.id(),
            lambda: self.lambda(),
            coefficients: self.coefficients().cloned(),
        }
    }

    /// Order of the moment this estimator targets: 2 for all variance
    /// forms (including the biased naive one), 3 for the third moment.
    pub fn moment_order(&self) -> MomentOrder {
        match self.kind {
            EstimatorKind::ThirdMoment(_) => MomentOrder::Three,
            _ => MomentOrder::Two,
        }
    }

    /// Checks that a sample of size `n` can be fed to this estimator.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if n == 0 {
            return Err(Error::EmptySample);
        }
        match &self.kind {
            EstimatorKind::Naive => Ok(()),
            EstimatorKind::Unbiased => {
                if n < 2 {
                    Err(Error::DegenerateSample { n })
                } else {
                    Ok(())
                }
            }
            EstimatorKind::Aauv(c)
            | EstimatorKind::Interpolated(c, _)
            | EstimatorKind::ThirdMoment(c) => {
                if c.len() != n {
                    Err(Error::LengthMismatch {
                        sample_len: n,
                        coeff_len: c.len(),
                    })
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn evaluate(&self, x: &Sample) -> Result<f64> {
        self.validate_for(x.len())?;
        Ok(self.evaluate_slice(x.values()))
    }

    /// Hot-path evaluation; callers must have run [`Estimator::validate_for`].
    pub(crate) fn evaluate_slice(&self, values: &[f64]) -> f64 {
        match &self.kind {
            EstimatorKind::Naive => naive_variance_value(values),
            EstimatorKind::Unbiased => unbiased_variance_value(values),
            EstimatorKind::Aauv(c) => aauv_value(values, c.weights()),
            EstimatorKind::Interpolated(c, lambda) => {
                interpolated_variance_value(values, c.weights(), *lambda)
            }
            EstimatorKind::ThirdMoment(c) => third_moment_value(values, c.weights()),
        }
    }
}

// ---------------------------------------------------------------------------
// Slice-level evaluation kernels. All public operations and both
// verification engines go through these, so that identical inputs produce
// bit-identical estimates everywhere.
// ---------------------------------------------------------------------------

pub(crate) fn mean_value(values: &[f64]) -> f64 {
    numeric::total(values.iter().copied()) / values.len() as f64
}

pub(crate) fn naive_variance_value(values: &[f64]) -> f64 {
    let mean = mean_value(values);
    numeric::sum_squared_deviations(values, mean) / values.len() as f64
}

pub(crate) fn unbiased_variance_value(values: &[f64]) -> f64 {
    let mean = mean_value(values);
    numeric::sum_squared_deviations(values, mean) / (values.len() - 1) as f64
}

pub(crate) fn aauv_value(values: &[f64], weights: &[f64]) -> f64 {
    let adjusted = numeric::dot(weights, values);
    numeric::sum_squared_deviations(values, adjusted) / values.len() as f64
}

pub(crate) fn interpolated_center(values: &[f64], weights: &[f64], lambda: f64) -> f64 {
    lambda * numeric::dot(weights, values) + (1.0 - lambda) * mean_value(values)
}

pub(crate) fn interpolated_variance_value(values: &[f64], weights: &[f64], lambda: f64) -> f64 {
    let center = interpolated_center(values, weights, lambda);
    let denominator = (values.len() - 1) as f64 + lambda * lambda;
    numeric::sum_squared_deviations(values, center) / denominator
}

pub(crate) fn third_moment_value(values: &[f64], weights: &[f64]) -> f64 {
    let adjusted = numeric::dot(weights, values);
    numeric::sum_cubed_deviations(values, adjusted) / values.len() as f64
}

fn check_length(x: &Sample, c: &CoefficientVector) -> Result<()> {
    if x.len() != c.len() {
        return Err(Error::LengthMismatch {
            sample_len: x.len(),
            coeff_len: c.len(),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Feasibility checks
// ---------------------------------------------------------------------------

/// Residuals of the order-2 conditions `sum(c) = 1`, `sum(c^2) = 2/N`.
///
/// Pure report: works for any vector regardless of its declared order.
pub fn check_order2_conditions(c: &CoefficientVector) -> Order2Residuals {
    let n = c.len() as f64;
    let sum = numeric::total(c.weights().iter().copied());
    let sum_sq = numeric::total(c.weights().iter().map(|&w| w * w));
    Order2Residuals {
        sum: sum - 1.0,
        sum_sq: sum_sq - 2.0 / n,
    }
}

/// Residuals of the order-3 conditions `sum(c) = 1`,
/// `(3/N) * sum(c^2) - sum(c^3) = 3/N`.
pub fn check_order3_conditions(c: &CoefficientVector) -> Order3Residuals {
    let n = c.len() as f64;
    let sum = numeric::total(c.weights().iter().copied());
    let sum_sq = numeric::total(c.weights().iter().map(|&w| w * w));
    let sum_cu = numeric::total(c.weights().iter().map(|&w| w * w * w));
    Order3Residuals {
        sum: sum - 1.0,
        k3: (3.0 / n) * sum_sq - sum_cu - 3.0 / n,
    }
}

/// Errors unless `c` is declared order 2 and both residuals are within `tol`.
pub fn require_order2_feasible(c: &CoefficientVector, tol: f64) -> Result<()> {
    if c.order() != MomentOrder::Two {
        return Err(Error::OrderMismatch {
            expected: 2,
            actual: c.order().as_u8(),
        });
    }
    let residuals = check_order2_conditions(c);
    if !residuals.within(tol) {
        return Err(Error::InfeasibleOrder2 {
            residual_sum: residuals.sum,
            residual_sumsq: residuals.sum_sq,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Errors unless `c` is declared order 3 and both residuals are within `tol`.
pub fn require_order3_feasible(c: &CoefficientVector, tol: f64) -> Result<()> {
    if c.order() != MomentOrder::Three {
        return Err(Error::OrderMismatch {
            expected: 3,
            actual: c.order().as_u8(),
        });
    }
    let residuals = check_order3_conditions(c);
    if !residuals.within(tol) {
        return Err(Error::InfeasibleOrder3 {
            residual_sum: residuals.sum,
            residual_k3: residuals.k3,
            tolerance: tol,
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Basic estimators
// ---------------------------------------------------------------------------

/// Arithmetic mean `sum(x) / N`.
pub fn sample_mean(x: &Sample) -> f64 {
    mean_value(x.values())
}

/// Biased variance `sum((x - mean)^2) / N`.
///
/// The only variance form defined at N = 1, where it returns 0.
pub fn naive_variance(x: &Sample) -> EstimateReport {
    EstimateReport {
        estimator_id: EstimatorId::Naive,
        estimate: naive_variance_value(x.values()),
        lambda: None,
        coefficients: None,
        n: x.len(),
    }
}

/// Standard unbiased variance `sum((x - mean)^2) / (N - 1)`.
pub fn unbiased_variance(x: &Sample) -> Result<EstimateReport> {
    if x.len() < 2 {
        return Err(Error::DegenerateSample { n: x.len() });
    }
    Ok(EstimateReport {
        estimator_id: EstimatorId::Unbiased,
        estimate: unbiased_variance_value(x.values()),
        lambda: None,
        coefficients: None,
        n: x.len(),
    })
}

/// Weighted mean `sum(c[i] * x[i])`. No feasibility requirement.
pub fn weighted_mean(x: &Sample, c: &CoefficientVector) -> Result<f64> {
    check_length(x, c)?;
    Ok(numeric::dot(c.weights(), x.values()))
}

/// Average-adjusted variance `sum((x - sum(c*x))^2) / N` with the
/// order-2 feasibility gate.
///
/// The denominator is N, never N - 1; feasible weights are what make the
/// result unbiased.
pub fn aauv(x: &Sample, c: &CoefficientVector) -> Result<EstimateReport> {
    aauv_with_tol(x, c, DEFAULT_FEASIBILITY_TOL)
}

/// [`aauv`] with a caller-chosen feasibility tolerance.
pub fn aauv_with_tol(x: &Sample, c: &CoefficientVector, tol: f64) -> Result<EstimateReport> {
    check_length(x, c)?;
    require_order2_feasible(c, tol)?;
    Ok(EstimateReport {
        estimator_id: EstimatorId::Aauv,
        estimate: aauv_value(x.values(), c.weights()),
        lambda: None,
        coefficients: Some(c.clone()),
        n: x.len(),
    })
}

/// Ungated evaluation of the average-adjusted formula.
///
/// Skips the feasibility check, so the result is not necessarily an
/// unbiased variance estimate. Exploratory use only.
pub fn aauv_raw(x: &Sample, c: &CoefficientVector) -> Result<f64> {
    check_length(x, c)?;
    Ok(aauv_value(x.values(), c.weights()))
}

/// Interpolated mean `lambda * sum(c*x) + (1 - lambda) * mean(x)`.
pub fn interpolated_mean(x: &Sample, c: &CoefficientVector, lambda: f64) -> Result<f64> {
    check_length(x, c)?;
    if !lambda.is_finite() {
        return Err(Error::NonFiniteLambda { lambda });
    }
    require_order2_feasible(c, DEFAULT_FEASIBILITY_TOL)?;
    Ok(interpolated_center(x.values(), c.weights(), lambda))
}

/// Interpolated variance: squared deviations from the interpolated mean,
/// divided by `N - 1 + lambda^2`.
///
/// Unbiased for every real `lambda`; `lambda = 0` reproduces the standard
/// unbiased variance and `lambda = 1` the average-adjusted one.
pub fn interpolated_variance(
    x: &Sample,
    c: &CoefficientVector,
    lambda: f64,
) -> Result<EstimateReport> {
    interpolated_variance_with_tol(x, c, lambda, DEFAULT_FEASIBILITY_TOL)
}

/// [`interpolated_variance`] with a caller-chosen feasibility tolerance.
pub fn interpolated_variance_with_tol(
    x: &Sample,
    c: &CoefficientVector,
    lambda: f64,
    tol: f64,
) -> Result<EstimateReport> {
    check_length(x, c)?;
    if !lambda.is_finite() {
        return Err(Error::NonFiniteLambda { lambda });
    }
    require_order2_feasible(c, tol)?;
    Ok(EstimateReport {
        estimator_id: EstimatorId::Interpolated,
        estimate: interpolated_variance_value(x.values(), c.weights(), lambda),
        lambda: Some(lambda),
        coefficients: Some(c.clone()),
        n: x.len(),
    })
}

/// The lambda that makes the interpolated denominator equal `k`.
///
/// Solves `N - 1 + lambda^2 = k`, so `k` must be at least `N - 1`.
pub fn lambda_for_denominator(k: f64, n: usize) -> Result<f64> {
    let min = (n - 1) as f64;
    if k.is_nan() || k < min {
        return Err(Error::DenominatorBelowMinimum { k, n });
    }
    Ok((k - min).sqrt())
}

/// Third central moment estimator `sum((x - sum(c*x))^3) / N` with the
/// order-3 feasibility gate.
pub fn third_moment_estimator(x: &Sample, c: &CoefficientVector) -> Result<EstimateReport> {
    third_moment_estimator_with_tol(x, c, DEFAULT_FEASIBILITY_TOL)
}

/// [`third_moment_estimator`] with a caller-chosen feasibility tolerance.
pub fn third_moment_estimator_with_tol(
    x: &Sample,
    c: &CoefficientVector,
    tol: f64,
) -> Result<EstimateReport> {
    check_length(x, c)?;
    require_order3_feasible(c, tol)?;
    Ok(EstimateReport {
        estimator_id: EstimatorId::ThirdMoment,
        estimate: third_moment_value(x.values(), c.weights()),
        lambda: None,
        coefficients: Some(c.clone()),
        n: x.len(),
    })
}

/// Ungated evaluation of the third-moment formula; not necessarily
/// unbiased. Exploratory use only.
pub fn third_moment_raw(x: &Sample, c: &CoefficientVector) -> Result<f64> {
    check_length(x, c)?;
    Ok(third_moment_value(x.values(), c.weights()))
}

// ---------------------------------------------------------------------------
// Coefficient constructions
// ---------------------------------------------------------------------------

/// Half-sample weights: the first `n/2` entries are `2/n`, the rest 0.
pub fn coeffs_half_sample(n: usize) -> Result<CoefficientVector> {
    if n < 2 {
        return Err(Error::TooFewCoefficients { n });
    }
    if !n.is_multiple_of(2) {
        return Err(Error::HalfSampleOddLength { n });
    }
    let mut weights = vec![0.0; n];
    for w in weights.iter_mut().take(n / 2) {
        *w = 2.0 / n as f64;
    }
    CoefficientVector::new(weights, MomentOrder::Two)
}

/// Two-level block weights: the first `m` entries carry
/// `(m + sqrt(m(n-m))) / (nm)` and the remaining `n - m` carry
/// `(n - m - sqrt(m(n-m))) / (n(n-m))`.
///
/// Order-2 feasible by construction; `m = n/2` reproduces the half-sample
/// weights.
pub fn coeffs_m_block(n: usize, m: usize) -> Result<CoefficientVector> {
    if n < 2 {
        return Err(Error::TooFewCoefficients { n });
    }
    if m < 1 || m >= n {
        return Err(Error::BlockSizeOutOfRange { n, m });
    }
    let (nf, mf) = (n as f64, m as f64);
    let root = (mf * (nf - mf)).sqrt();
    let head = (mf + root) / (nf * mf);
    let tail = (nf - mf - root) / (nf * (nf - mf));
    let mut weights = vec![tail; n];
    for w in weights.iter_mut().take(m) {
        *w = head;
    }
    CoefficientVector::new(weights, MomentOrder::Two)
}

/// A uniformly random point on the order-2 feasibility manifold.
///
/// The solution set of the conditions is the sphere of radius
/// `sqrt(1/n)` around the uniform weights `1/n`, inside the hyperplane
/// orthogonal to the all-ones direction. A standard-normal vector is
/// projected onto that hyperplane and rescaled to the sphere, which makes
/// the draw isotropic. Deterministic for a fixed seed (ChaCha12 stream).
pub fn coeffs_random_feasible(n: usize, seed: u64) -> Result<CoefficientVector> {
    if n < 2 {
        return Err(Error::TooFewCoefficients { n });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let nf = n as f64;
    let radius = (1.0 / nf).sqrt();
    loop {
        let mut direction: Vec<f64> =
            (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let mean = numeric::total(direction.iter().copied()) / nf;
        for d in direction.iter_mut() {
            *d -= mean;
        }
        let norm = numeric::total(direction.iter().map(|&d| d * d)).sqrt();
        if norm < 1e-12 {
            // degenerate draw along the all-ones direction; retry
            continue;
        }
        let scale = radius / norm;
        let weights: Vec<f64> = direction.iter().map(|&d| 1.0 / nf + scale * d).collect();
        return CoefficientVector::new(weights, MomentOrder::Two);
    }
}

/// Order-3 family for `n = 2m + k`: `m` entries of `alpha`, `m` of
/// `-alpha`, and `k` of `1/k`, with
/// `alpha = sqrt((3k(k-1) + n) / (3(n-k)k^2))`.
pub fn coeffs_third_family(m: usize, k: usize) -> Result<CoefficientVector> {
    if m < 1 || k < 1 {
        return Err(Error::ThirdFamilyParams { m, k });
    }
    let n = 2 * m + k;
    let (nf, kf) = (n as f64, k as f64);
    let alpha = ((3.0 * kf * (kf - 1.0) + nf) / (3.0 * (nf - kf) * kf * kf)).sqrt();
    let beta = 1.0 / kf;
    let mut weights = Vec::with_capacity(n);
    weights.extend(std::iter::repeat_n(alpha, m));
    weights.extend(std::iter::repeat_n(-alpha, m));
    weights.extend(std::iter::repeat_n(beta, k));
    CoefficientVector::new(weights, MomentOrder::Three)
}

/// Range every entry of an order-2 feasible vector must lie in:
/// `(1 - sqrt(n-1)) / n` to `(1 + sqrt(n-1)) / n`.
pub fn coeff_bound(n: usize) -> (f64, f64) {
    let nf = n as f64;
    let root = (nf - 1.0).sqrt();
    ((1.0 - root) / nf, (1.0 + root) / nf)
}

/// Sum of pairwise products `sum_{i != j} c[i]c[j] = (sum c)^2 - sum(c^2)`.
///
/// Equals `(n - 2) / n` for every order-2 feasible vector.
pub fn pairwise_product_sum(c: &CoefficientVector) -> f64 {
    let sum = numeric::total(c.weights().iter().copied());
    let sum_sq = numeric::total(c.weights().iter().map(|&w| w * w));
    sum * sum - sum_sq
}
