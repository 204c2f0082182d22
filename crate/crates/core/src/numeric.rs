//! Compensated floating-point accumulation.
//!
//! Every sum over observations or coefficient weights in this crate runs
//! through [`CompensatedSum`], a Neumaier-style Kahan accumulator. The
//! exactness checks elsewhere compare permutation averages and condition
//! residuals at 1e-10, which naive accumulation cannot sustain once the
//! term counts reach the tens of thousands.

/// Neumaier variant of Kahan summation.
///
/// Unlike plain Kahan, the compensation update stays correct when the
/// incoming term is larger in magnitude than the running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds `value` into the running sum.
    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another accumulator into this one.
    ///
    /// Merge order is part of the determinism contract: callers combine
    /// partial sums in fixed index order, never in completion order.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.compensation);
    }

    /// The compensated total.
    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of a sequence of terms.
pub fn total(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}

/// Compensated dot product `sum(a[i] * b[i])`. Lengths must match.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = CompensatedSum::new();
    for (&x, &y) in a.iter().zip(b) {
        acc.add(x * y);
    }
    acc.value()
}

/// Compensated `sum((x[i] - center)^2)`.
pub fn sum_squared_deviations(values: &[f64], center: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in values {
        let d = x - center;
        acc.add(d * d);
    }
    acc.value()
}

/// Compensated `sum((x[i] - center)^3)`.
pub fn sum_cubed_deviations(values: &[f64], center: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &x in values {
        let d = x - center;
        acc.add(d * d * d);
    }
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_terms() {
        // naive accumulation loses both 1.0 terms here
        assert_eq!(total([1.0, 1e100, 1.0, -1e100]), 2.0);
    }

    #[test]
    fn ill_conditioned_alternating_sum() {
        let xs: Vec<f64> = (0..10_000).flat_map(|_| [1.0e16, 1.0, -1.0e16]).collect();
        assert_eq!(total(xs), 10_000.0);
    }

    #[test]
    fn merge_matches_one_pass_closely() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64).sin() * 1e10).collect();
        let mut left = CompensatedSum::new();
        for &x in &xs[..500] {
            left.add(x);
        }
        let mut right = CompensatedSum::new();
        for &x in &xs[500..] {
            right.add(x);
        }
        let mut merged = left;
        merged.merge(&right);
        let one_pass = total(xs.iter().copied());
        assert!((merged.value() - one_pass).abs() <= 1e-6 * one_pass.abs().max(1.0));
    }

    #[test]
    fn dot_and_deviation_helpers() {
        assert_eq!(dot(&[0.5, 0.5, 0.0, 0.0], &[1.0, 2.0, 3.0, 4.0]), 1.5);
        assert_eq!(sum_squared_deviations(&[0.0, 2.0], 1.0), 2.0);
        assert_eq!(sum_cubed_deviations(&[0.0, 0.0, 3.0, 3.0], 3.0), -54.0);
    }
}
