use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the estimator, symmetrization, and
/// verification layers.
#[derive(Debug, Clone, PartialEq, Error)]
#[non_exhaustive]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("sample value at index {index} is not finite: {value}")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("degenerate sample: need at least 2 observations, got {n}")]
    DegenerateSample { n: usize },

    #[error("length mismatch: sample has {sample_len} values, coefficient vector has {coeff_len}")]
    LengthMismatch { sample_len: usize, coeff_len: usize },

    #[error("empty coefficient vector")]
    EmptyCoefficients,

    #[error("coefficient at index {index} is not finite: {value}")]
    NonFiniteCoefficient { index: usize, value: f64 },

    #[error("coefficient vector is declared order {actual} but order {expected} is required here")]
    OrderMismatch { expected: u8, actual: u8 },

    #[error(
        "coefficients are not order-2 feasible: residual_sum = {residual_sum:e}, \
         residual_sumsq = {residual_sumsq:e} (tolerance {tolerance:e})"
    )]
    InfeasibleOrder2 {
        residual_sum: f64,
        residual_sumsq: f64,
        tolerance: f64,
    },

    #[error(
        "coefficients are not order-3 feasible: residual_sum = {residual_sum:e}, \
         residual_k3 = {residual_k3:e} (tolerance {tolerance:e})"
    )]
    InfeasibleOrder3 {
        residual_sum: f64,
        residual_k3: f64,
        tolerance: f64,
    },

    #[error("half-sample requires even N, got {n}")]
    HalfSampleOddLength { n: usize },

    #[error("block size must satisfy 1 <= m < n, got m = {m}, n = {n}")]
    BlockSizeOutOfRange { n: usize, m: usize },

    #[error("third-moment family requires m >= 1 and k >= 1, got m = {m}, k = {k}")]
    ThirdFamilyParams { m: usize, k: usize },

    #[error("feasible coefficient vectors need at least 2 entries, got {n}")]
    TooFewCoefficients { n: usize },

    #[error("denominator below N-1 unreachable: k = {k}, n = {n}")]
    DenominatorBelowMinimum { k: f64, n: usize },

    #[error("lambda must be finite, got {lambda}")]
    NonFiniteLambda { lambda: f64 },

    #[error("exact permutation averaging is capped at N <= {cap}, got N = {n}; use sampled mode")]
    PermutationCapExceeded { n: usize, cap: usize },

    #[error("sampled permutation averaging needs reps >= 2, got {reps}")]
    TooFewPermutationReps { reps: u64 },

    #[error("exact expectation requires a discrete distribution")]
    EnumerationRequiresDiscrete,

    #[error("enumeration cap exceeded: {outcomes} outcomes > {cap}")]
    EnumerationCapExceeded { outcomes: u128, cap: u64 },

    #[error("experiments need reps >= {min}, got {reps}")]
    TooFewReps { reps: u64, min: u64 },

    #[error("experiments need n >= 2, got {n}")]
    ExperimentSampleTooSmall { n: usize },

    #[error("no estimators given")]
    NoEstimators,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("distribution spec parse error at offset {offset}: {message}")]
    DistributionParse { offset: usize, message: String },
}
