//! Low-discrepancy colourings for set systems of bounded degree.
//!
//! If every element lies in at most `t` sets, iterative rounding produces a
//! `±1` colouring in which every set sum has absolute value at most
//! `2t − 1`. Each round moves the fractional colouring along a nonzero
//! integer kernel direction of the "dangerous" sets (those with more than
//! `t` unfrozen elements); the direction comes from the counting search in
//! [`crate::kernel`], with exact elimination as a fallback once the search
//! budget runs out. All state is exact rational.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::family::SetFamily;
use crate::kernel::{
    find_left_kernel_vector, normalize_sign, IntMatrix, KernelError, SearchOptions, SearchOutcome,
    Strategy,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiscrepancyError {
    #[error("ground set is empty")]
    EmptyGround,
    #[error("colouring has {found} entries, family has n = {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("internal invariant violated in round {round}: {message}")]
    InvariantViolation { round: usize, message: String },
}

/// Fractional state: values in `[-1, 1]`; frozen values are exactly `±1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalColoring {
    values: Vec<BigRational>,
    frozen: Vec<bool>,
}

impl FractionalColoring {
    fn zero(n: usize) -> Self {
        FractionalColoring {
            values: vec![BigRational::zero(); n],
            frozen: vec![false; n],
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    fn unfrozen(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&j| !self.frozen[j])
            .collect()
    }

    fn set_sum(&self, set: &[usize]) -> BigRational {
        set.iter()
            .fold(BigRational::zero(), |acc, &e| acc + &self.values[e - 1])
    }

    fn within_unit_box(&self) -> bool {
        let one = BigRational::one();
        self.values.iter().all(|v| v.abs() <= one)
    }
}

/// A total `±1` colouring, `signs[j] = colour of element j+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub signs: Vec<i8>,
}

impl Coloring {
    pub fn new(signs: Vec<i8>) -> Option<Self> {
        signs
            .iter()
            .all(|&s| s == 1 || s == -1)
            .then_some(Coloring { signs })
    }
}

/// Largest number of members containing a single element; 0 for an empty
/// family.
pub fn max_degree(family: &SetFamily) -> usize {
    let mut degree = vec![0usize; family.n() + 1];
    for set in family.sets() {
        for &e in set {
            degree[e] += 1;
        }
    }
    degree.into_iter().max().unwrap_or(0)
}

/// Signed sum of each member under `coloring`.
pub fn set_sums(family: &SetFamily, coloring: &Coloring) -> Result<Vec<i64>, DiscrepancyError> {
    if coloring.signs.len() != family.n() {
        return Err(DiscrepancyError::LengthMismatch {
            expected: family.n(),
            found: coloring.signs.len(),
        });
    }
    Ok(family
        .sets()
        .iter()
        .map(|s| s.iter().map(|&e| i64::from(coloring.signs[e - 1])).sum())
        .collect())
}

/// `max_S |Σ_{j∈S} signs[j]|`, 0 for an empty family.
pub fn discrepancy_of(family: &SetFamily, coloring: &Coloring) -> Result<u64, DiscrepancyError> {
    Ok(set_sums(family, coloring)?
        .into_iter()
        .map(i64::unsigned_abs)
        .max()
        .unwrap_or(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSource {
    /// Pigeonhole collision search.
    Counting,
    /// Exact elimination after the search budget ran out.
    Elimination,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundAudit {
    pub round: usize,
    pub unfrozen_before: usize,
    /// 1-based positions of the dangerous sets.
    pub dangerous: Vec<usize>,
    /// 1-based elements that carried the direction.
    pub support: Vec<usize>,
    /// Direction entries for `support`, already oriented.
    pub direction: Vec<i64>,
    pub source: DirectionSource,
    /// Exact step length, as `p/q`.
    pub step: String,
    /// 1-based elements that reached `±1` this round.
    pub newly_frozen: Vec<usize>,
}

/// Snapshot of a set when it stops being dangerous.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReleaseAudit {
    pub set: usize,
    /// Rounds completed before the release (0 = never dangerous).
    pub round: usize,
    pub fractional_sum: String,
    pub unfrozen: usize,
    pub final_sum: i64,
    /// `|final − fractional| < 2·unfrozen`, or equality when nothing was
    /// left unfrozen.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeckFialaRun {
    pub coloring: Coloring,
    pub set_sums: Vec<i64>,
    pub t: usize,
    /// `2t − 1`, or 0 for a family without members.
    pub bound: u64,
    pub discrepancy: u64,
    pub guarantee_holds: bool,
    pub rounds: Vec<RoundAudit>,
    pub releases: Vec<ReleaseAudit>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BeckFialaConfig {
    /// Node budget handed to the counting search each round.
    pub kernel_budget: u64,
}

impl Default for BeckFialaConfig {
    fn default() -> Self {
        BeckFialaConfig {
            kernel_budget: 200_000,
        }
    }
}

pub fn beck_fiala_color(family: &SetFamily) -> Result<Coloring, DiscrepancyError> {
    Ok(beck_fiala_run(family, &BeckFialaConfig::default())?.coloring)
}

/// Iterative rounding with a full audit trail.
pub fn beck_fiala_run(
    family: &SetFamily,
    config: &BeckFialaConfig,
) -> Result<BeckFialaRun, DiscrepancyError> {
    let n = family.n();
    if n == 0 {
        return Err(DiscrepancyError::EmptyGround);
    }
    let t = max_degree(family);
    let mut state = FractionalColoring::zero(n);
    let mut released: Vec<Option<(usize, BigRational, usize)>> = vec![None; family.m()];
    let mut rounds = Vec::new();

    let unfrozen_count = |state: &FractionalColoring, set: &[usize]| {
        set.iter().filter(|&&e| !state.frozen[e - 1]).count()
    };
    let record_releases = |state: &FractionalColoring,
                           released: &mut Vec<Option<(usize, BigRational, usize)>>,
                           round: usize| {
        for (idx, set) in family.sets().iter().enumerate() {
            let u = unfrozen_count(state, set);
            if released[idx].is_none() && u <= t {
                released[idx] = Some((round, state.set_sum(set), u));
            }
        }
    };
    record_releases(&state, &mut released, 0);

    let mut round = 0;
    loop {
        let unfrozen = state.unfrozen();
        if unfrozen.is_empty() {
            break;
        }
        round += 1;
        let fault = |message: String| DiscrepancyError::InvariantViolation { round, message };

        let dangerous: Vec<usize> = (0..family.m())
            .filter(|&s| unfrozen_count(&state, family.set(s)) > t)
            .collect();
        // Dangerous sets each hold > t unfrozen elements and every element is
        // in <= t sets, so there are fewer of them than unfrozen elements.
        if dangerous.len() >= unfrozen.len() {
            return Err(fault(format!(
                "{} dangerous sets for {} unfrozen elements",
                dangerous.len(),
                unfrozen.len()
            )));
        }
        let support: Vec<usize> = unfrozen[..dangerous.len() + 1].to_vec();
        let mut system = IntMatrix::zeros(support.len(), dangerous.len());
        for (c, &s) in dangerous.iter().enumerate() {
            for (r, &var) in support.iter().enumerate() {
                if family.set(s).binary_search(&(var + 1)).is_ok() {
                    system.set(r, c, 1);
                }
            }
        }
        let (mut direction, source) =
            kernel_direction(&system, config.kernel_budget).map_err(|e| fault(e.to_string()))?;

        let before: Vec<BigRational> = dangerous
            .iter()
            .map(|&s| state.set_sum(family.set(s)))
            .collect();

        let (plus_step, plus_frozen) = max_step(&state, &support, &direction, 1);
        let (minus_step, minus_frozen) = max_step(&state, &support, &direction, -1);
        // Orientation that freezes the smallest element index; ties go to +.
        let (step, newly_frozen) = if minus_frozen.first() < plus_frozen.first() {
            direction.iter_mut().for_each(|d| *d = -*d);
            (minus_step, minus_frozen)
        } else {
            (plus_step, plus_frozen)
        };

        for (&var, &d) in support.iter().zip(&direction) {
            state.values[var] += &step * BigRational::from_integer(BigInt::from(d));
        }
        let one = BigRational::one();
        for &var in &support {
            if state.values[var].abs() == one {
                state.frozen[var] = true;
            }
        }
        if newly_frozen.is_empty() || newly_frozen.iter().any(|&v| !state.frozen[v]) {
            return Err(fault("step did not freeze an element".into()));
        }
        if !state.within_unit_box() {
            return Err(fault("value left [-1, 1]".into()));
        }
        for (&s, b) in dangerous.iter().zip(&before) {
            if state.set_sum(family.set(s)) != *b {
                return Err(fault(format!("sum of dangerous set {} moved", s + 1)));
            }
        }

        rounds.push(RoundAudit {
            round,
            unfrozen_before: unfrozen.len(),
            dangerous: dangerous.iter().map(|s| s + 1).collect(),
            support: support.iter().map(|v| v + 1).collect(),
            direction,
            source,
            step: step.to_string(),
            newly_frozen: newly_frozen.iter().map(|v| v + 1).collect(),
        });
        record_releases(&state, &mut released, round);
    }

    let signs = state
        .values
        .iter()
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    let coloring = Coloring { signs };
    let sums = set_sums(family, &coloring)?;
    let discrepancy = sums.iter().map(|s| s.unsigned_abs()).max().unwrap_or(0);
    let bound = if family.m() == 0 { 0 } else { 2 * t as u64 - 1 };

    let releases = released
        .into_iter()
        .enumerate()
        .map(|(idx, rel)| {
            let (round, frac, unfrozen) =
                rel.expect("all sets are released once everything is frozen");
            let final_sum = sums[idx];
            let moved = (BigRational::from_integer(BigInt::from(final_sum)) - &frac).abs();
            let within_bound = if unfrozen == 0 {
                moved.is_zero()
            } else {
                moved < BigRational::from_integer(BigInt::from(2 * unfrozen))
            };
            ReleaseAudit {
                set: idx + 1,
                round,
                fractional_sum: frac.to_string(),
                unfrozen,
                final_sum,
                within_bound,
            }
        })
        .collect();

    Ok(BeckFialaRun {
        coloring,
        set_sums: sums,
        t,
        bound,
        discrepancy,
        guarantee_holds: discrepancy <= bound,
        rounds,
        releases,
    })
}

/// Largest step `λ > 0` keeping `x + sign·λ·d` inside `[-1, 1]` on the
/// support, and the (0-based) elements that land on the boundary.
fn max_step(
    state: &FractionalColoring,
    support: &[usize],
    direction: &[i64],
    sign: i64,
) -> (BigRational, Vec<usize>) {
    let one = BigRational::one();
    let mut best: Option<BigRational> = None;
    let mut hits = Vec::new();
    for (&var, &d) in support.iter().zip(direction) {
        let d = d * sign;
        if d == 0 {
            continue;
        }
        let x = &state.values[var];
        let target = if d > 0 { &one - x } else { -&one - x };
        let lambda = target / BigRational::from_integer(BigInt::from(d));
        match &best {
            Some(b) if lambda > *b => {}
            Some(b) if lambda == *b => hits.push(var),
            _ => {
                best = Some(lambda);
                hits = vec![var];
            }
        }
    }
    hits.sort_unstable();
    (best.expect("direction is nonzero"), hits)
}

/// Nonzero integer `τ` with `τᵀ·system = 0`: counting search first, exact
/// elimination if the search budget is exhausted.
fn kernel_direction(
    system: &IntMatrix,
    budget: u64,
) -> Result<(Vec<i64>, DirectionSource), KernelError> {
    let options = SearchOptions::new(Strategy::DfsPruned).node_budget(budget);
    match find_left_kernel_vector(system, &options) {
        Ok(search) => match search.outcome {
            SearchOutcome::Found(tau) => Ok((tau.entries().to_vec(), DirectionSource::Counting)),
            // The collision bound guarantees a vector inside the box.
            SearchOutcome::NotFound => Err(KernelError::ZeroVector),
        },
        Err(KernelError::BudgetExceeded { .. }) => {
            Ok((elimination_direction(system), DirectionSource::Elimination))
        }
        Err(e) => Err(e),
    }
}

/// Solves `Σ_r τ(r)·system[r][c] = 0` by row reduction of the transposed
/// system (one equation per column), setting the first free unknown to 1.
/// Requires more rows than columns.
fn elimination_direction(system: &IntMatrix) -> Vec<i64> {
    let unknowns = system.rows();
    let mut eqs: Vec<Vec<BigRational>> = (0..system.cols())
        .map(|c| {
            (0..unknowns)
                .map(|r| BigRational::from_integer(BigInt::from(system.get(r, c))))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..eqs.len()).find(|&r| !eqs[r][col].is_zero()) else {
            continue;
        };
        eqs.swap(row, p);
        let inv = BigRational::one() / eqs[row][col].clone();
        eqs[row].iter_mut().for_each(|v| *v *= &inv);
        let pivot_row = eqs[row].clone();
        for (r, eq) in eqs.iter_mut().enumerate() {
            if r != row && !eq[col].is_zero() {
                let factor = eq[col].clone();
                for (v, p) in eq.iter_mut().zip(&pivot_row) {
                    *v -= &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..unknowns)
        .find(|c| !pivots.contains(c))
        .expect("more unknowns than equations leaves a free unknown");
    let mut solution = vec![BigRational::zero(); unknowns];
    solution[free] = BigRational::one();
    for (r, &p) in pivots.iter().enumerate() {
        solution[p] = -eqs[r][free].clone();
    }
    let lcm = solution
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = solution.iter().map(|v| (v * &lcm).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let mut out: Vec<i64> = ints
        .iter()
        .map(|v| (v / &gcd).to_i64().expect("direction entries fit in i64"))
        .collect();
    normalize_sign(&mut out);
    out
}
