//! Canonical and random set families.
//!
//! Randomized generators draw from ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded with `seed_from_u64`, so a `(parameters, seed)` pair always yields
//! the same family.

use std::collections::HashSet;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::family::SetFamily;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("order {0} is not prime")]
    NonPrimeOrder(u64),
    #[error("requested {requested} sets but at most {capacity} are possible")]
    CapacityExceeded { requested: usize, capacity: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

/// `{1,2}, {1,3}, ..., {1,n}, {2,...,n}`: 1-intersecting with `n` members.
pub fn near_pencil(n: usize) -> Result<SetFamily, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooSmall {
            what: "n",
            min: 3,
            got: n,
        });
    }
    let mut sets: Vec<Vec<usize>> = (2..=n).map(|i| vec![1, i]).collect();
    sets.push((2..=n).collect());
    Ok(SetFamily::new(n, sets).expect("near-pencil is a valid family"))
}

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Normalized homogeneous coordinates over `Z_q`: first nonzero entry is 1.
fn normalized_triples(q: u64) -> Vec<[u64; 3]> {
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in 0..q {
        for b in 0..q {
            out.push([1, a, b]);
        }
    }
    for c in 0..q {
        out.push([0, 1, c]);
    }
    out.push([0, 0, 1]);
    out
}

/// Lines of the projective plane `PG(2, q)` for prime `q`.
///
/// Points are numbered `1..=q²+q+1` in the order `(1,a,b)`, `(0,1,c)`,
/// `(0,0,1)`; lines use the same enumeration of dual coordinates and contain
/// the points whose dot product with them vanishes mod `q`.
pub fn projective_plane(q: u64) -> Result<SetFamily, GeneratorError> {
    if !is_prime(q) {
        return Err(GeneratorError::NonPrimeOrder(q));
    }
    let points = normalized_triples(q);
    let sets = points
        .iter()
        .map(|line| {
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| (line[0] * p[0] + line[1] * p[1] + line[2] * p[2]) % q == 0)
                .map(|(idx, _)| idx + 1)
                .collect()
        })
        .collect();
    Ok(SetFamily::new(points.len(), sets).expect("projective lines are distinct"))
}

/// Sunflower with core `{1..k}` and singleton petals `{k+i}`.
///
/// With `include_core` the core itself comes first and `m - 1` petals
/// follow; otherwise there are `m` petals.
pub fn sunflower(
    n: usize,
    k: usize,
    m: usize,
    include_core: bool,
) -> Result<SetFamily, GeneratorError> {
    if k == 0 || k >= n {
        return Err(GeneratorError::InvalidParameters(format!(
            "sunflower needs 1 <= k < n, got k={k}, n={n}"
        )));
    }
    if include_core && m == 0 {
        return Err(GeneratorError::InvalidParameters(
            "a sunflower with its core has at least one member".into(),
        ));
    }
    let capacity = if include_core { n - k + 1 } else { n - k };
    if m > capacity {
        return Err(GeneratorError::CapacityExceeded {
            requested: m,
            capacity: capacity as u128,
        });
    }
    let core: Vec<usize> = (1..=k).collect();
    let petals = if include_core { m - 1 } else { m };
    let mut sets = Vec::with_capacity(m);
    if include_core {
        sets.push(core.clone());
    }
    for i in 1..=petals {
        let mut s = core.clone();
        s.push(k + i);
        sets.push(s);
    }
    Ok(SetFamily::new(n, sets).expect("sunflower members are distinct"))
}

/// Largest ground set for which random families are supported.
pub const MAX_RANDOM_N: usize = 62;

fn mask_to_set(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

/// `m` distinct nonempty subsets of `{1..n}`, sampled uniformly without
/// replacement, in sampling order.
pub fn random_family(n: usize, m: usize, seed: u64) -> Result<SetFamily, GeneratorError> {
    if m == 0 {
        return Err(GeneratorError::TooSmall {
            what: "m",
            min: 1,
            got: 0,
        });
    }
    if n > MAX_RANDOM_N {
        return Err(GeneratorError::InvalidParameters(format!(
            "random families support n <= {MAX_RANDOM_N}"
        )));
    }
    let capacity = (1u128 << n) - 1;
    if m as u128 > capacity {
        return Err(GeneratorError::CapacityExceeded {
            requested: m,
            capacity,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks: Vec<u64> = if n <= 20 {
        index::sample(&mut rng, capacity as usize, m)
            .into_iter()
            .map(|i| i as u64 + 1)
            .collect()
    } else {
        let full = (1u64 << n) - 1;
        let mut seen = HashSet::with_capacity(m);
        let mut masks = Vec::with_capacity(m);
        while masks.len() < m {
            let mask = rng.gen::<u64>() & full;
            if mask != 0 && seen.insert(mask) {
                masks.push(mask);
            }
        }
        masks
    };
    let sets = masks.into_iter().map(mask_to_set).collect();
    Ok(SetFamily::new(n, sets).expect("sampled masks are distinct and nonempty"))
}

/// Random family in which every element lies in at most `t` members.
///
/// Each element independently joins between 0 and `t` of `m` candidate
/// sets, chosen uniformly; empty and repeated candidates are dropped, so the
/// result may have fewer than `m` members.
pub fn bounded_degree_family(
    n: usize,
    m: usize,
    t: usize,
    seed: u64,
) -> Result<SetFamily, GeneratorError> {
    if m == 0 {
        return Err(GeneratorError::TooSmall {
            what: "m",
            min: 1,
            got: 0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut candidates = vec![Vec::new(); m];
    for element in 1..=n {
        let degree = rng.gen_range(0..=t.min(m));
        for set in index::sample(&mut rng, m, degree) {
            candidates[set].push(element);
        }
    }
    let mut seen = HashSet::new();
    let sets: Vec<Vec<usize>> = candidates
        .into_iter()
        .filter(|s| !s.is_empty() && seen.insert(s.clone()))
        .collect();
    Ok(SetFamily::new(n, sets).expect("candidates are filtered to distinct nonempty sets"))
}
