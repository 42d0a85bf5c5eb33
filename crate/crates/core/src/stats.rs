//! Sample mean and standard error from exact integer sums.

use num_traits::{Float, FromPrimitive};
use serde::Serialize;

/// Mean and standard error of `samples` observations `x_i = c_i / scale`
/// where the `c_i` are integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleStats<F> {
    pub mean: F,
    /// Unbiased sample standard deviation over `√samples`; `None` for a
    /// single sample.
    pub stderr: Option<F>,
    pub samples: u64,
}

/// Exact running sums of integer observations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegerMoments {
    pub count: u64,
    pub sum: i128,
    pub sum_sq: i128,
}

impl IntegerMoments {
    pub fn push(&mut self, value: i64) {
        self.count += 1;
        self.sum += i128::from(value);
        self.sum_sq += i128::from(value) * i128::from(value);
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
        }
    }

    /// Statistics of `c_i / scale`.
    pub fn stats<F: Float + FromPrimitive>(&self, scale: u64) -> SampleStats<F> {
        let n = self.count;
        let f = |v: i128| F::from_i128(v).expect("finite");
        let scale = f(i128::from(scale));
        let mean = if n == 0 { F::nan() } else { f(self.sum) / (f(i128::from(n)) * scale) };
        let stderr = (n >= 2).then(|| {
            let n128 = i128::from(n);
            // n·Σc² − (Σc)² = n(n−1)·s², exact in integers.
            let centered = n128 * self.sum_sq - self.sum * self.sum;
            let var = f(centered) / f(n128 * (n128 - 1)) / (scale * scale);
            (var / f(n128)).sqrt()
        });
        SampleStats { mean, stderr, samples: n }
    }
}

impl<F: Float> SampleStats<F> {
    /// `|mean − target| <= sigmas · stderr`. A zero stderr requires an
    /// exact hit.
    pub fn within(&self, target: F, sigmas: F) -> bool {
        match self.stderr {
            Some(se) => (self.mean - target).abs() <= sigmas * se,
            None => false,
        }
    }
}
