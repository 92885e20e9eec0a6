//! Exact pigeonhole arithmetic. Every quantity here is an arbitrary-precision
//! integer; strict inequalities are decided exactly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::KernelError;
use crate::serde_decimal;

/// Counting parameters for `m` weight functions into `[s]` over an `m × n`
/// 0/1 matrix, with `s = mⁿ + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PigeonholeParams {
    pub m: usize,
    pub n: usize,
    #[serde(with = "serde_decimal")]
    pub s: BigUint,
    /// `sᵐ`, the number of weight functions.
    #[serde(with = "serde_decimal")]
    pub function_count: BigUint,
    /// `(m·s)ⁿ`.
    #[serde(with = "serde_decimal")]
    pub profile_bound: BigUint,
    /// `(m·s + 1)ⁿ`, the count of tuples with entries in `0..=m·s`.
    #[serde(with = "serde_decimal")]
    pub exact_profile_bound: BigUint,
    /// `sᵐ > (m·s)ⁿ`.
    pub pigeonhole_applies: bool,
    /// `sᵐ > (m·s + 1)ⁿ`.
    pub applies_with_exact_bound: bool,
}

pub fn pigeonhole_params(m: usize, n: usize) -> Result<PigeonholeParams, KernelError> {
    if m == 0 || n == 0 {
        return Err(KernelError::InvalidDimensions { m, n });
    }
    let mb = BigUint::from(m);
    let s = mb.pow(exp(n)) + 1u32;
    let function_count = s.pow(exp(m));
    let ms = &mb * &s;
    let profile_bound = ms.pow(exp(n));
    let exact_profile_bound = (ms + 1u32).pow(exp(n));
    Ok(PigeonholeParams {
        m,
        n,
        pigeonhole_applies: function_count > profile_bound,
        applies_with_exact_bound: function_count > exact_profile_bound,
        s,
        function_count,
        profile_bound,
        exact_profile_bound,
    })
}

fn exp(k: usize) -> u32 {
    u32::try_from(k).expect("exponent fits in u32")
}

/// Smallest box size `H` for which weight vectors in `{0..H}ᵐ` must collide
/// on an `n`-column integer matrix with entries bounded by `B` in absolute
/// value: `(H+1)ᵐ > (m·B·H + 1)ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SiegelBound {
    pub n: usize,
    pub m: usize,
    pub coeff_bound: u64,
    #[serde(with = "serde_decimal")]
    pub h: BigUint,
}

impl SiegelBound {
    /// `H` as a `u64`, saturating.
    pub fn h_saturating(&self) -> u64 {
        self.h.to_u64().unwrap_or(u64::MAX)
    }
}

/// `(H+1)ᵐ > (m·B·H + 1)ⁿ`.
pub fn siegel_inequality_holds(h: &BigUint, n: usize, m: usize, coeff_bound: u64) -> bool {
    let lhs = (h + 1u32).pow(exp(m));
    let rhs = (BigUint::from(m) * coeff_bound * h + 1u32).pow(exp(n));
    lhs > rhs
}

/// Finds the smallest `H ≥ 1` satisfying the collision inequality.
///
/// With `g(H) = m·ln(H+1) − n·ln(mBH+1)`, `g(0) = 0` and `g'` changes sign at
/// most once (from negative to positive) when `m > n`, so the set of
/// satisfying `H` is upward closed. Doubling followed by bisection therefore
/// finds the threshold.
pub fn siegel_bound(n: usize, m: usize, coeff_bound: u64) -> Result<SiegelBound, KernelError> {
    if n == 0 || m <= n {
        return Err(KernelError::NotUnderdetermined { m, n });
    }
    if coeff_bound == 0 {
        return Err(KernelError::InvalidCoefficientBound);
    }
    let holds = |h: &BigUint| siegel_inequality_holds(h, n, m, coeff_bound);
    let mut lo = BigUint::one();
    let h = if holds(&lo) {
        lo
    } else {
        let mut hi = BigUint::from(2u32);
        while !holds(&hi) {
            lo = hi.clone();
            hi <<= 1;
        }
        // invariant: !holds(lo) && holds(hi)
        while &hi - &lo > BigUint::one() {
            let mid: BigUint = (&lo + &hi) >> 1;
            if holds(&mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(SiegelBound {
        n,
        m,
        coeff_bound,
        h,
    })
}
