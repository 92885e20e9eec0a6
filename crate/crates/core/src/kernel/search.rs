//! Constructive search for small nonzero left-kernel vectors.
//!
//! Both strategies deepen over box sizes `h = 1, 2, ..., max_coeff`, so a
//! result found at level `h` has max-abs entry exactly `h`. Results are
//! canonical: first nonzero entry positive, and lexicographically smallest
//! among the vectors of that max-abs level.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{siegel_bound, verify_kernel, IntMatrix, KernelError, KernelVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Tabulate profiles of weight vectors in `{0..h}ᵐ`; a repeated profile
    /// yields the difference of the two weight vectors.
    BoxCollision,
    /// Assign `τ(1), τ(2), ...` in lexicographic order, pruning when a column
    /// sum can no longer return to zero.
    DfsPruned,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::BoxCollision => "box",
            Strategy::DfsPruned => "dfs",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "box" | "box-collision" => Ok(Strategy::BoxCollision),
            "dfs" | "dfs-pruned" => Ok(Strategy::DfsPruned),
            other => Err(format!("unknown strategy `{other}` (expected box or dfs)")),
        }
    }
}

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: Strategy,
    /// Box half-width. Defaults to the collision bound `H` when the matrix
    /// has more rows than columns; required otherwise.
    pub max_coeff: Option<u64>,
    /// Apply canonical selection among all candidates of the winning level.
    /// Without it the box strategy returns its first collision.
    pub deterministic: bool,
    /// Cap on enumerated weight vectors / search nodes / compared pairs.
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::DfsPruned,
            max_coeff: None,
            deterministic: true,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

impl SearchOptions {
    pub fn new(strategy: Strategy) -> Self {
        SearchOptions {
            strategy,
            ..Default::default()
        }
    }

    pub fn max_coeff(mut self, h: u64) -> Self {
        self.max_coeff = Some(h);
        self
    }

    pub fn deterministic(mut self, yes: bool) -> Self {
        self.deterministic = yes;
        self
    }

    pub fn node_budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "tau", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(KernelVector),
    /// No nonzero vector with max-abs entry at most `max_coeff` exists.
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelSearch {
    #[serde(flatten)]
    pub outcome: SearchOutcome,
    pub max_coeff: u64,
    pub strategy: Strategy,
    pub deterministic: bool,
    pub nodes: u64,
}

impl KernelSearch {
    pub fn tau(&self) -> Option<&KernelVector> {
        match &self.outcome {
            SearchOutcome::Found(t) => Some(t),
            SearchOutcome::NotFound => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self.outcome, SearchOutcome::Found(_))
    }
}

/// Box size used when the caller does not supply one.
pub fn default_max_coeff(x: &IntMatrix) -> Result<u64, KernelError> {
    if x.cols() == 0 && x.rows() > 0 {
        // No equations: every unit vector qualifies.
        return Ok(1);
    }
    let bound =
        siegel_bound(x.cols(), x.rows(), x.max_abs_entry().max(1)).map_err(|e| match e {
            KernelError::NotUnderdetermined { .. } => KernelError::MaxCoeffRequired {
                m: x.rows(),
                n: x.cols(),
            },
            other => other,
        })?;
    Ok(bound.h_saturating())
}

/// Searches for a nonzero `τ` with `Σ_i τ(i)·X[i][j] = 0` for every column
/// `j` and `max |τ(i)| <= max_coeff`.
pub fn find_left_kernel_vector(
    x: &IntMatrix,
    options: &SearchOptions,
) -> Result<KernelSearch, KernelError> {
    if x.rows() == 0 {
        return Err(KernelError::EmptyMatrix);
    }
    let max_coeff = match options.max_coeff {
        Some(0) => return Err(KernelError::InvalidMaxCoeff),
        Some(h) => h,
        None => default_max_coeff(x)?,
    };
    // Beyond this, profile sums could leave i128.
    let max_coeff = max_coeff.min(i64::MAX as u64 / 2);

    let mut nodes = 0u64;
    let mut found = None;
    for h in 1..=max_coeff {
        let hit = match options.strategy {
            Strategy::BoxCollision => box_level(
                x,
                h as i64,
                options.deterministic,
                options.node_budget,
                &mut nodes,
            ),
            Strategy::DfsPruned => dfs_level(x, h as i64, options.node_budget, &mut nodes),
        }
        .map_err(|()| KernelError::BudgetExceeded {
            nodes,
            completed_level: h - 1,
        })?;
        if let Some(tau) = hit {
            found = Some(tau);
            break;
        }
    }

    let outcome = match found {
        Some(tau) => {
            debug_assert_eq!(verify_kernel(x, &tau), Ok(true));
            SearchOutcome::Found(KernelVector::new(tau).expect("search returns nonzero vectors"))
        }
        None => SearchOutcome::NotFound,
    };
    Ok(KernelSearch {
        outcome,
        max_coeff,
        strategy: options.strategy,
        deterministic: options.deterministic,
        nodes,
    })
}

/// Flips sign so that the first nonzero entry is positive.
pub(crate) fn normalize_sign(tau: &mut [i64]) {
    if let Some(&lead) = tau.iter().find(|&&v| v != 0) {
        if lead < 0 {
            tau.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

fn charge(nodes: &mut u64, amount: u64, budget: u64) -> Result<(), ()> {
    *nodes = nodes.saturating_add(amount);
    if *nodes > budget {
        Err(())
    } else {
        Ok(())
    }
}

/// Mixed-radix decode of an enumeration index into a weight vector.
fn decode(mut code: u64, radix: u64, m: usize) -> Vec<i64> {
    let mut w = vec![0i64; m];
    for slot in w.iter_mut().rev() {
        *slot = (code % radix) as i64;
        code /= radix;
    }
    w
}

fn difference(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut d: Vec<i64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    normalize_sign(&mut d);
    d
}

/// One box level: enumerate `{0..h}ᵐ` with an odometer, keeping each
/// profile in a table keyed by the profile tuple.
fn box_level(
    x: &IntMatrix,
    h: i64,
    deterministic: bool,
    budget: u64,
    nodes: &mut u64,
) -> Result<Option<Vec<i64>>, ()> {
    let m = x.rows();
    let n = x.cols();
    let radix = h as u64 + 1;
    let total = u32::try_from(m)
        .ok()
        .and_then(|e| radix.checked_pow(e))
        .ok_or(())?;
    if nodes.saturating_add(total) > budget {
        *nodes = nodes.saturating_add(total);
        return Err(());
    }

    let mut weights = vec![0i64; m];
    let mut profile = vec![0i128; n];
    let mut first_seen: HashMap<Vec<i128>, u64> = HashMap::new();
    let mut classes: HashMap<Vec<i128>, Vec<u64>> = HashMap::new();

    for code in 0..total {
        if code > 0 {
            // Advance the odometer, last position fastest.
            let mut i = m - 1;
            while weights[i] == h {
                for (c, &e) in profile.iter_mut().zip(x.row(i)) {
                    *c -= i128::from(h) * i128::from(e);
                }
                weights[i] = 0;
                i -= 1;
            }
            weights[i] += 1;
            for (c, &e) in profile.iter_mut().zip(x.row(i)) {
                *c += i128::from(e);
            }
        }
        if deterministic {
            classes.entry(profile.clone()).or_default().push(code);
        } else {
            match first_seen.entry(profile.clone()) {
                Entry::Occupied(prev) => {
                    let earlier = decode(*prev.get(), radix, m);
                    *nodes += code + 1;
                    return Ok(Some(difference(&weights, &earlier)));
                }
                Entry::Vacant(slot) => {
                    slot.insert(code);
                }
            }
        }
    }
    *nodes += total;
    if !deterministic {
        return Ok(None);
    }

    // Every kernel vector in [-h, h]ᵐ is the difference of its positive and
    // negative parts, both in {0..h}ᵐ with equal profiles, so scanning all
    // colliding pairs sees every candidate of this level.
    let mut best: Option<Vec<i64>> = None;
    for codes in classes.values().filter(|c| c.len() > 1) {
        let members: Vec<Vec<i64>> = codes.iter().map(|&c| decode(c, radix, m)).collect();
        let pairs = (members.len() * (members.len() - 1) / 2) as u64;
        charge(nodes, pairs, budget)?;
        for a in 0..members.len() {
            for b in (a + 1)..members.len() {
                let d = difference(&members[a], &members[b]);
                if best.as_ref().is_none_or(|cur| d < *cur) {
                    best = Some(d);
                }
            }
        }
    }
    Ok(best)
}

/// One DFS level over `[-h, h]ᵐ` in lexicographic order, leading nonzero
/// entry positive. The first hit is the lexicographic minimum.
fn dfs_level(x: &IntMatrix, h: i64, budget: u64, nodes: &mut u64) -> Result<Option<Vec<i64>>, ()> {
    let m = x.rows();
    let n = x.cols();
    // reach[i][j] = Σ_{r >= i} |X[r][j]|
    let mut reach = vec![vec![0i128; n]; m + 1];
    for i in (0..m).rev() {
        for j in 0..n {
            reach[i][j] = reach[i + 1][j] + i128::from(x.get(i, j).unsigned_abs());
        }
    }
    let mut state = Dfs {
        x,
        h,
        reach,
        partial: vec![0; n],
        tau: vec![0; m],
        budget,
        nodes,
    };
    state
        .descend(0, true)
        .map(|hit| hit.then(|| state.tau.clone()))
}

struct Dfs<'a> {
    x: &'a IntMatrix,
    h: i64,
    reach: Vec<Vec<i128>>,
    partial: Vec<i128>,
    tau: Vec<i64>,
    budget: u64,
    nodes: &'a mut u64,
}

impl Dfs<'_> {
    fn descend(&mut self, i: usize, prefix_zero: bool) -> Result<bool, ()> {
        if i == self.x.rows() {
            return Ok(!prefix_zero && self.partial.iter().all(|&c| c == 0));
        }
        let low = if prefix_zero { 0 } else { -self.h };
        for value in low..=self.h {
            charge(self.nodes, 1, self.budget)?;
            self.apply(i, value);
            let slack = i128::from(self.h);
            let feasible = self
                .partial
                .iter()
                .zip(&self.reach[i + 1])
                .all(|(&p, &r)| p.abs() <= slack * r);
            if feasible && self.descend(i + 1, prefix_zero && value == 0)? {
                self.tau[i] = value;
                return Ok(true);
            }
            self.apply(i, -value);
        }
        Ok(false)
    }

    fn apply(&mut self, i: usize, value: i64) {
        if value == 0 {
            return;
        }
        for (c, &e) in self.partial.iter_mut().zip(self.x.row(i)) {
            *c += i128::from(value) * i128::from(e);
        }
    }
}
