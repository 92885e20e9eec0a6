//! The weighted-sum equation chain for a `k`-intersecting family and a
//! candidate left-kernel vector `τ` of its incidence matrix.
//!
//! With `b_e = Σ_i τ(i)·x_{i,e}` the per-element kernel sums:
//!
//! * size sum: `Σ_e b_e = Σ_i τ(i)|A_i|`
//! * set equation `i`: `Σ_{e∈A_i} b_e = τ(i)|A_i| + k·Σ_{j≠i} τ(j)`
//! * aggregation: `Σ_i (set equation i) = size sum + k(m−1)·Σ_i τ(i)`
//! * final terms: `set equation i − k·Σ_j τ(j) = τ(i)(|A_i| − k)`
//!
//! For a genuine kernel vector every left-hand side vanishes, so every final
//! term is zero, which forces `τ = 0` once all members are larger than `k`.

use std::convert::Infallible;

use serde::Serialize;

use super::ProverError;
use crate::family::SetFamily;
use crate::intersect::{require_k_intersecting, IntersectError};
use crate::kernel::verify_kernel;
use crate::SCHEMA_VERSION;

/// Residues of every step of the chain for one `(family, k, τ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RefutationCertificate {
    pub schema_version: u32,
    pub family_digest: String,
    pub k: usize,
    pub tau: Vec<i64>,
    /// Per-element kernel sums `b_1, ..., b_n`.
    pub element_sums: Vec<i128>,
    /// `Σ_i τ(i)|A_i|`.
    pub eq3_residue: i128,
    /// Entry `i`: `τ(i)|A_i| + k·Σ_{j≠i} τ(j)`.
    pub eq4_residues: Vec<i128>,
    /// `Σ_i τ(i)`.
    pub eq6_residue: i128,
    /// Entry `i`: `τ(i)(|A_i| − k)`.
    pub eq7_terms: Vec<i128>,
    /// `Σ_i eq4_residues[i] == eq3_residue + k(m−1)·eq6_residue`.
    pub aggregation_identity_holds: bool,
    /// Every residue and term is zero.
    pub chain_valid: bool,
}

fn check_len(family: &SetFamily, tau: &[i64]) -> Result<(), ProverError> {
    if tau.len() != family.m() {
        return Err(ProverError::DimensionMismatch {
            expected: family.m(),
            found: tau.len(),
        });
    }
    Ok(())
}

fn lift(e: IntersectError) -> ProverError {
    match e {
        IntersectError::HypothesisViolated {
            k,
            first,
            second,
            found,
        } => ProverError::HypothesisViolated {
            k,
            first,
            second,
            found,
        },
        IntersectError::NonPositiveK => ProverError::NonPositiveK,
        other => ProverError::InvariantViolation(other.to_string()),
    }
}

/// `b_e = Σ_i τ(i)·x_{i,e}` for `e = 1..n`, i.e. the left-hand sides of the
/// per-element kernel equations.
pub fn element_sums(family: &SetFamily, tau: &[i64]) -> Result<Vec<i128>, ProverError> {
    check_len(family, tau)?;
    let mut sums = vec![0i128; family.n()];
    for (set, &t) in family.sets().iter().zip(tau) {
        for &e in set {
            sums[e - 1] += i128::from(t);
        }
    }
    Ok(sums)
}

/// `Σ_i τ(i)|A_i|`, cross-checked against the total of the per-element
/// kernel sums.
pub fn eq3_weighted_size_sum(family: &SetFamily, tau: &[i64]) -> Result<i128, ProverError> {
    let by_sets: i128 = family
        .sets()
        .iter()
        .zip(tau)
        .map(|(s, &t)| i128::from(t) * s.len() as i128)
        .sum();
    let by_elements: i128 = element_sums(family, tau)?.iter().sum();
    if by_sets != by_elements {
        return Err(ProverError::InvariantViolation(format!(
            "size sum {by_sets} differs from element-sum total {by_elements}"
        )));
    }
    Ok(by_sets)
}

/// `Σ_{e∈A_i} b_e = Σ_j τ(j)|A_i ∩ A_j|` for every member, with no
/// hypothesis on the intersections.
pub fn aggregated_set_equations(family: &SetFamily, tau: &[i64]) -> Result<Vec<i128>, ProverError> {
    let b = element_sums(family, tau)?;
    Ok(family
        .sets()
        .iter()
        .map(|set| set.iter().map(|&e| b[e - 1]).sum())
        .collect())
}

/// Closed form of set equation `i` (0-based) under the `k`-intersecting
/// hypothesis, checked against the sum of the per-element equations over
/// the elements of `A_i`.
pub fn eq4_set_equation(
    family: &SetFamily,
    k: usize,
    tau: &[i64],
    i: usize,
) -> Result<i128, ProverError> {
    check_len(family, tau)?;
    if i >= family.m() {
        return Err(ProverError::DimensionMismatch {
            expected: family.m(),
            found: i + 1,
        });
    }
    require_k_intersecting(family, k).map_err(lift)?;
    let total: i128 = tau.iter().map(|&t| i128::from(t)).sum();
    let ti = i128::from(tau[i]);
    let closed = ti * family.set(i).len() as i128 + k as i128 * (total - ti);

    let b = element_sums(family, tau)?;
    let derived: i128 = family.set(i).iter().map(|&e| b[e - 1]).sum();
    if closed != derived {
        return Err(ProverError::InvariantViolation(format!(
            "set equation {}: closed form {closed} differs from element sum {derived}",
            i + 1
        )));
    }
    Ok(closed)
}

/// Computes every residue of the chain for a `k`-intersecting family and an
/// arbitrary integer vector. Nothing here assumes `τ` is a kernel vector.
pub fn equation_chain(
    family: &SetFamily,
    k: usize,
    tau: &[i64],
) -> Result<RefutationCertificate, ProverError> {
    if k == 0 {
        return Err(ProverError::NonPositiveK);
    }
    check_len(family, tau)?;
    require_k_intersecting(family, k).map_err(lift)?;

    let element_sums = element_sums(family, tau)?;
    let eq3_residue = eq3_weighted_size_sum(family, tau)?;
    let eq4_residues = (0..family.m())
        .map(|i| eq4_set_equation(family, k, tau, i))
        .collect::<Result<Vec<_>, _>>()?;
    let eq6_residue: i128 = tau.iter().map(|&t| i128::from(t)).sum();
    let eq7_terms: Vec<i128> = family
        .sets()
        .iter()
        .zip(tau)
        .map(|(s, &t)| i128::from(t) * (s.len() as i128 - k as i128))
        .collect();

    let m = family.m() as i128;
    let aggregation_identity_holds =
        eq4_residues.iter().sum::<i128>() == eq3_residue + k as i128 * (m - 1) * eq6_residue;
    let chain_valid = eq3_residue == 0
        && eq6_residue == 0
        && eq4_residues.iter().all(|&r| r == 0)
        && eq7_terms.iter().all(|&t| t == 0);

    Ok(RefutationCertificate {
        schema_version: SCHEMA_VERSION,
        family_digest: family.digest(),
        k,
        tau: tau.to_vec(),
        element_sums,
        eq3_residue,
        eq4_residues,
        eq6_residue,
        eq7_terms,
        aggregation_identity_holds,
        chain_valid,
    })
}

/// Runs the refutation for a claimed kernel vector. It cannot succeed: every
/// return is the reason the claim fails.
///
/// On inputs that pass all gates (hypothesis holds, every member larger
/// than `k`, `τ` a nonzero kernel vector) the chain forces `τ = 0`; reaching
/// that point is reported as [`ProverError::TheoremViolation`]. If any step
/// of the chain itself fails to hold, the result is
/// [`ProverError::InvariantViolation`].
pub fn derive_contradiction(
    family: &SetFamily,
    k: usize,
    tau: &[i64],
) -> Result<Infallible, ProverError> {
    if k == 0 {
        return Err(ProverError::NonPositiveK);
    }
    check_len(family, tau)?;
    require_k_intersecting(family, k).map_err(lift)?;
    if let Some(i) = family.sets().iter().position(|s| s.len() <= k) {
        return Err(ProverError::SmallSetPresent {
            index: i + 1,
            size: family.set(i).len(),
            k,
        });
    }
    let x = family.build_incidence().to_int_matrix();
    let in_kernel =
        verify_kernel(&x, tau).map_err(|e| ProverError::InvariantViolation(e.to_string()))?;
    if !in_kernel {
        return Err(ProverError::NotInKernel);
    }

    let cert = equation_chain(family, k, tau)?;
    let broken = |step: &str| {
        ProverError::InvariantViolation(format!("{step} does not vanish for a kernel vector"))
    };
    if cert.element_sums.iter().any(|&b| b != 0) {
        return Err(broken("per-element equation"));
    }
    if cert.eq3_residue != 0 {
        return Err(broken("size sum"));
    }
    if cert.eq4_residues.iter().any(|&r| r != 0) {
        return Err(broken("set equation"));
    }
    // Σ τ(i) recovered from the aggregation identity; needs k(m−1) ≠ 0.
    let m = family.m() as i128;
    let scale = k as i128 * (m - 1);
    if scale == 0 {
        return Err(ProverError::InvariantViolation(
            "single-member family admitted a kernel vector".into(),
        ));
    }
    let aggregated: i128 = cert.eq4_residues.iter().sum();
    let eq6_derived = (aggregated - cert.eq3_residue) / scale;
    if (aggregated - cert.eq3_residue) % scale != 0 || eq6_derived != cert.eq6_residue {
        return Err(broken("aggregation identity"));
    }
    for (i, (&r, &t)) in cert.eq4_residues.iter().zip(&cert.eq7_terms).enumerate() {
        if r - k as i128 * eq6_derived != t {
            return Err(ProverError::InvariantViolation(format!(
                "final term {} disagrees with its set equation",
                i + 1
            )));
        }
    }
    if cert.eq7_terms.iter().any(|&t| t != 0) {
        return Err(broken("final term"));
    }
    // τ(i)(|A_i| − k) = 0 with |A_i| > k for every i, yet τ ≠ 0.
    Err(ProverError::TheoremViolation(Box::new(cert)))
}
