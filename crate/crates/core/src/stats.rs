//! Small statistical building blocks shared by the learners.

use std::f64::consts::PI;

/// Variance floor applied before evaluating a Gaussian density.
pub const VARIANCE_FLOOR: f64 = 1e-9;

/// Count, mean and sum of squared deviations of a sample, updated one value
/// at a time with Welford's recurrence.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GaussianEstimator {
    count: f64,
    mean: f64,
    m2: f64,
}

impl GaussianEstimator {
    pub fn from_parts(count: f64, mean: f64, m2: f64) -> Self {
        GaussianEstimator { count, mean, m2 }
    }

    /// Two-pass estimate: mean first, then the squared deviations.
    pub fn from_slice(values: &[f64]) -> Self {
        if values.is_empty() {
            return Self::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let m2 = values.iter().map(|x| (x - mean) * (x - mean)).sum();
        GaussianEstimator { count: n, mean, m2 }
    }

    pub fn add(&mut self, x: f64) {
        self.add_weighted(x, 1.0);
    }

    /// Weighted Welford update (West's form).
    pub fn add_weighted(&mut self, x: f64, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        let new_count = self.count + weight;
        let delta = x - self.mean;
        let mean = self.mean + delta * weight / new_count;
        self.m2 += weight * delta * (x - mean);
        self.mean = mean;
        self.count = new_count;
    }

    pub fn count(&self) -> f64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    /// Unbiased sample variance; 0 with fewer than two observations.
    pub fn variance(&self) -> f64 {
        if self.count > 1.0 {
            (self.m2 / (self.count - 1.0)).max(0.0)
        } else {
            0.0
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Log of the normal density at `x`, variance floored at
    /// [`VARIANCE_FLOOR`].
    pub fn log_density(&self, x: f64) -> f64 {
        let var = self.variance().max(VARIANCE_FLOOR);
        let d = x - self.mean;
        -0.5 * (2.0 * PI * var).ln() - d * d / (2.0 * var)
    }

    /// Estimated weight of observations `<= x`, plus the weight exactly at
    /// `x` when the distribution has collapsed to a point.
    pub fn weight_at_or_below(&self, x: f64) -> f64 {
        if self.count <= 0.0 {
            return 0.0;
        }
        let sd = self.std_dev();
        if sd > 0.0 {
            self.count * normal_cdf((x - self.mean) / sd)
        } else if x >= self.mean {
            self.count
        } else {
            0.0
        }
    }
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// Shannon entropy (bits) of a count vector.
pub fn entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| {
            let p = c / total;
            -p * p.log2()
        })
        .sum()
}
