//! Executable form of the row-independence argument for `k`-intersecting
//! families, and exhaustive extremal confirmation at small `n`.

mod chain;
mod extremal;

use thiserror::Error;

pub use chain::{
    aggregated_set_equations, derive_contradiction, element_sums, eq3_weighted_size_sum,
    eq4_set_equation, equation_chain, RefutationCertificate,
};
pub use extremal::{enumerate_max_family, ExtremalReport, MAX_EXTREMAL_N};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProverError {
    #[error("k must be positive")]
    NonPositiveK,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("family is not {k}-intersecting: |A_{first} ∩ A_{second}| = {found}")]
    HypothesisViolated {
        k: usize,
        first: usize,
        second: usize,
        found: usize,
    },
    #[error("member {index} has size {size} <= k = {k}; use the small-set reduction")]
    SmallSetPresent { index: usize, size: usize, k: usize },
    #[error("τ is not a nonzero left-kernel vector of the incidence matrix")]
    NotInKernel,
    #[error("equation chain completed with nonzero τ")]
    TheoremViolation(Box<RefutationCertificate>),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("search budget exhausted (best so far: {} sets)", .0.max_m)]
    BudgetExceeded(Box<ExtremalReport>),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}
