//! Constant-intersection set families and a counting route to their row
//! independence.
//!
//! The crate covers four related pieces:
//!
//! * [`family`], [`intersect`], [`generators`]: set families over `{1..n}`,
//!   pairwise-intersection checks, the size-`k` member reduction, and
//!   canonical extremal families.
//! * [`kernel`]: profiles of weight functions, exact pigeonhole arithmetic,
//!   and collision search for small integer left-kernel vectors.
//! * [`prover`]: replay of the weighted-sum equation chain that rules out a
//!   kernel vector for `k`-intersecting families, plus exhaustive extremal
//!   search at small `n`.
//! * [`discrepancy`] and [`graham_pollak`]: the same kernel step driving
//!   iterative rounding for low-degree set systems, and biclique partitions
//!   of complete graphs.

pub mod discrepancy;
pub mod family;
pub mod generators;
pub mod graham_pollak;
pub mod intersect;
pub mod kernel;
pub mod prover;

pub use family::{FamilyError, IncidenceMatrix, SetFamily};
pub use intersect::{check_k_intersecting, reduce_small_set, IntersectionReport, ReductionReport};
pub use kernel::{find_left_kernel_vector, verify_kernel, IntMatrix, KernelVector};

/// Version tag carried by every structured report.
pub const SCHEMA_VERSION: u32 = 1;

/// Serializes big integers as decimal strings.
pub(crate) mod serde_decimal {
    use num_bigint::BigUint;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_str_radix(10))
    }
}
