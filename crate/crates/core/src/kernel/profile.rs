use serde::Serialize;

use super::{IntMatrix, KernelError};

/// A weight function `f: [m] -> [s]`, stored as `values[i] = f(i+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightFunction {
    values: Vec<u64>,
    range_bound: u64,
}

impl WeightFunction {
    pub fn new(values: Vec<u64>, range_bound: u64) -> Result<Self, KernelError> {
        if let Some(&bad) = values.iter().find(|&&v| v == 0 || v > range_bound) {
            return Err(KernelError::WeightOutOfRange {
                value: bad,
                range_bound,
            });
        }
        Ok(WeightFunction {
            values,
            range_bound,
        })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn range_bound(&self) -> u64 {
        self.range_bound
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Per-column weighted sums `c_j = Σ_i f(i)·X[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Profile {
    pub components: Vec<i128>,
}

/// Profile of a weight function.
pub fn compute_profile(x: &IntMatrix, f: &WeightFunction) -> Result<Profile, KernelError> {
    let weights: Vec<i128> = f.values().iter().map(|&v| i128::from(v)).collect();
    column_sums(x, &weights)
}

/// Same sums for an arbitrary integer vector, including zero and signed
/// vectors that arise as differences of weight functions.
pub fn weighted_column_sums(x: &IntMatrix, weights: &[i64]) -> Result<Profile, KernelError> {
    let weights: Vec<i128> = weights.iter().map(|&v| i128::from(v)).collect();
    column_sums(x, &weights)
}

fn column_sums(x: &IntMatrix, weights: &[i128]) -> Result<Profile, KernelError> {
    if weights.len() != x.rows() {
        return Err(KernelError::DimensionMismatch {
            expected: x.rows(),
            found: weights.len(),
        });
    }
    let mut components = vec![0i128; x.cols()];
    for (i, &w) in weights.iter().enumerate() {
        if w == 0 {
            continue;
        }
        for (c, &entry) in components.iter_mut().zip(x.row(i)) {
            *c += w * i128::from(entry);
        }
    }
    Ok(Profile { components })
}
