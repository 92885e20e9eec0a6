//! Pairwise-intersection verification and the size-`k` member reduction.

use serde::Serialize;
use thiserror::Error;

use crate::family::SetFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntersectError {
    #[error("k must be positive")]
    NonPositiveK,
    #[error("family is not {k}-intersecting: |A_{first} ∩ A_{second}| = {found}")]
    HypothesisViolated {
        k: usize,
        first: usize,
        second: usize,
        found: usize,
    },
    #[error("no member has size exactly {k}")]
    NoSmallSet { k: usize },
}

/// A pair of sets whose intersection size differs from the first pair's.
/// Positions are 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub expected: usize,
    pub found: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub is_k_intersecting: bool,
    /// `None` when the family has at most one member (vacuous case), or when
    /// the check failed.
    pub k: Option<usize>,
    pub violation: Option<Violation>,
}

/// Checks that all pairwise intersections have one common size.
///
/// The common size is taken from the pair `(1, 2)`; the first pair in
/// lexicographic order that disagrees is reported.
pub fn check_k_intersecting(family: &SetFamily) -> IntersectionReport {
    let m = family.m();
    if m <= 1 {
        return IntersectionReport {
            is_k_intersecting: true,
            k: None,
            violation: None,
        };
    }
    let expected = family.intersection_size(0, 1);
    for i in 0..m {
        for j in (i + 1)..m {
            let found = family.intersection_size(i, j);
            if found != expected {
                return IntersectionReport {
                    is_k_intersecting: false,
                    k: None,
                    violation: Some(Violation {
                        first: i + 1,
                        second: j + 1,
                        expected,
                        found,
                    }),
                };
            }
        }
    }
    IntersectionReport {
        is_k_intersecting: true,
        k: Some(expected),
        violation: None,
    }
}

/// First pair (1-based) whose intersection is not exactly `k`.
pub(crate) fn first_pair_not_k(family: &SetFamily, k: usize) -> Option<(usize, usize, usize)> {
    let m = family.m();
    for i in 0..m {
        for j in (i + 1)..m {
            let found = family.intersection_size(i, j);
            if found != k {
                return Some((i + 1, j + 1, found));
            }
        }
    }
    None
}

/// Requires every pairwise intersection to be exactly `k`.
pub fn require_k_intersecting(family: &SetFamily, k: usize) -> Result<(), IntersectError> {
    match first_pair_not_k(family, k) {
        None => Ok(()),
        Some((first, second, found)) => Err(IntersectError::HypothesisViolated {
            k,
            first,
            second,
            found,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub k: usize,
    /// 1-based position of the chosen size-`k` member `A`.
    pub small_set_index: usize,
    /// `B \ A` for every other member, in family order.
    pub residues: Vec<Vec<usize>>,
    /// `n - k + 1`.
    pub derived_bound: usize,
    /// Every other member contains `A`.
    pub containment_ok: bool,
    /// The residues are pairwise disjoint.
    pub disjoint_ok: bool,
    /// Every residue is nonempty.
    pub residues_nonempty: bool,
    pub m: usize,
    /// `m <= n - k + 1`.
    pub bound_holds: bool,
}

/// Reduction for a `k`-intersecting family that has a member of size
/// exactly `k`: every other member contains it, and the leftovers are
/// disjoint nonempty subsets of the remaining `n - k` elements.
pub fn reduce_small_set(family: &SetFamily, k: usize) -> Result<ReductionReport, IntersectError> {
    if k == 0 {
        return Err(IntersectError::NonPositiveK);
    }
    require_k_intersecting(family, k)?;
    let small = family
        .sets()
        .iter()
        .position(|s| s.len() == k)
        .ok_or(IntersectError::NoSmallSet { k })?;
    let core = family.set(small);

    let mut containment_ok = true;
    let mut residues = Vec::with_capacity(family.m().saturating_sub(1));
    for (idx, set) in family.sets().iter().enumerate() {
        if idx == small {
            continue;
        }
        if !core.iter().all(|e| set.binary_search(e).is_ok()) {
            containment_ok = false;
        }
        residues.push(
            set.iter()
                .copied()
                .filter(|e| core.binary_search(e).is_err())
                .collect::<Vec<_>>(),
        );
    }

    let mut seen = vec![false; family.n() + 1];
    let mut disjoint_ok = true;
    for residue in &residues {
        for &e in residue {
            if seen[e] {
                disjoint_ok = false;
            }
            seen[e] = true;
        }
    }
    let residues_nonempty = residues.iter().all(|r| !r.is_empty());
    // k <= |A| <= n, so this never underflows.
    let derived_bound = family.n() - k + 1;

    Ok(ReductionReport {
        k,
        small_set_index: small + 1,
        residues,
        derived_bound,
        containment_ok,
        disjoint_ok,
        residues_nonempty,
        m: family.m(),
        bound_holds: family.m() <= derived_bound,
    })
}
