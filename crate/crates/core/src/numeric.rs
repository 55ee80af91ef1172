//! Deterministic summation primitives.
//!
//! Every norm, moment, and Monte Carlo reduction in this crate goes through
//! one of these two routines so that results are reproducible bit-for-bit
//! and the documented tolerances are meaningful.

/// Pairwise (tree) summation.
///
/// Error grows like O(log n) in the number of terms instead of O(n) for
/// naive left-to-right accumulation.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BASE: usize = 32;
    if values.len() <= BASE {
        let mut acc = 0.0;
        for &v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Neumaier-compensated accumulator for streaming reductions.
///
/// Associativity is restored operationally by always merging partials in a
/// fixed order; see the Monte Carlo batching contract.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge another accumulator; callers must fix the merge order.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
