//! Profiles of weight functions, pigeonhole arithmetic, and collision-based
//! search for nonzero integer left-kernel vectors.
//!
//! A left-kernel vector of an `m × n` matrix `X` is a nonzero `τ ∈ Zᵐ` with
//! `Σ_i τ(i)·X[i][j] = 0` for every column `j`. If two weight vectors share a
//! profile, their difference is such a vector; counting how many profiles
//! there can be shows a collision must occur once the box is large enough.

mod counting;
mod matrix;
pub mod oracle;
mod profile;
mod search;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use counting::{
    pigeonhole_params, siegel_bound, siegel_inequality_holds, PigeonholeParams, SiegelBound,
};
pub use matrix::IntMatrix;
pub use profile::{compute_profile, weighted_column_sums, Profile, WeightFunction};
pub(crate) use search::normalize_sign;
pub use search::{
    default_max_coeff, find_left_kernel_vector, KernelSearch, SearchOptions, SearchOutcome,
    Strategy, DEFAULT_NODE_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("dimensions must be positive, got m={m}, n={n}")]
    InvalidDimensions { m: usize, n: usize },
    #[error("need more unknowns than equations (m > n >= 1), got m={m}, n={n}")]
    NotUnderdetermined { m: usize, n: usize },
    #[error("coefficient bound must be positive")]
    InvalidCoefficientBound,
    #[error("no default box for m={m} <= n={n}; pass max_coeff explicitly")]
    MaxCoeffRequired { m: usize, n: usize },
    #[error("max_coeff must be at least 1")]
    InvalidMaxCoeff,
    #[error("weight {value} outside 1..={range_bound}")]
    WeightOutOfRange { value: u64, range_bound: u64 },
    #[error("the zero vector is not a kernel vector")]
    ZeroVector,
    #[error(
        "search budget exhausted after {nodes} nodes (levels 1..={completed_level} were exhausted)"
    )]
    BudgetExceeded { nodes: u64, completed_level: u64 },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A nonzero integer vector, `entries[i] = τ(i+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct KernelVector(Vec<i64>);

impl KernelVector {
    pub fn new(entries: Vec<i64>) -> Result<Self, KernelError> {
        if entries.iter().all(|&v| v == 0) {
            return Err(KernelError::ZeroVector);
        }
        Ok(KernelVector(entries))
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_abs(&self) -> u64 {
        self.0.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}

impl TryFrom<Vec<i64>> for KernelVector {
    type Error = KernelError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        KernelVector::new(v)
    }
}

impl From<KernelVector> for Vec<i64> {
    fn from(v: KernelVector) -> Self {
        v.0
    }
}

impl std::fmt::Display for KernelVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// True iff `tau` is nonzero and every column equation `Σ_i τ(i)·X[i][j] = 0`
/// holds exactly.
pub fn verify_kernel(x: &IntMatrix, tau: &[i64]) -> Result<bool, KernelError> {
    let sums = weighted_column_sums(x, tau)?;
    Ok(tau.iter().any(|&v| v != 0) && sums.components.iter().all(|&c| c == 0))
}
