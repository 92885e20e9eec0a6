//! Exhaustive search for the largest `k`-intersecting family on `n <= 7`
//! points, as a maximum clique in the intersection-compatibility graph.
//!
//! Vertices are the subsets of `{1..n}` with at least `k` elements, ordered
//! by their sorted element lists; two vertices are adjacent when they meet
//! in exactly `k` elements. At most 127 vertices, so neighbourhoods are
//! `u128` bitsets.

use serde::Serialize;

use super::ProverError;
use crate::family::SetFamily;

pub const MAX_EXTREMAL_N: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalReport {
    pub n: usize,
    pub k: usize,
    pub max_m: usize,
    /// Lexicographically smallest maximum family (by sorted set list) when
    /// `complete`; otherwise the best family seen so far.
    pub witness: SetFamily,
    /// `max_m <= n`.
    pub bound_respected: bool,
    pub nodes_explored: u64,
    /// False when the node budget interrupted the search.
    pub complete: bool,
}

type Bits = u128;

struct Graph {
    sets: Vec<Vec<usize>>,
    adj: Vec<Bits>,
}

impl Graph {
    fn new(n: usize, k: usize) -> Self {
        let mut sets: Vec<Vec<usize>> = (1u32..(1 << n))
            .filter(|mask| mask.count_ones() as usize >= k)
            .map(|mask| {
                (0..n)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b + 1)
                    .collect()
            })
            .collect();
        sets.sort();
        let masks: Vec<u32> = sets
            .iter()
            .map(|s| s.iter().fold(0u32, |acc, &e| acc | 1 << (e - 1)))
            .collect();
        let adj = masks
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                masks.iter().enumerate().fold(0 as Bits, |acc, (j, &b)| {
                    if i != j && (a & b).count_ones() as usize == k {
                        acc | 1 << j
                    } else {
                        acc
                    }
                })
            })
            .collect();
        Graph { sets, adj }
    }

    /// Greedy sequential colouring of `p`. Returns vertices grouped by colour
    /// and, in parallel, the colour number (1-based) of each.
    fn colour_sort(&self, mut p: Bits) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(p.count_ones() as usize);
        let mut colours = Vec::with_capacity(order.capacity());
        let mut colour = 0;
        while p != 0 {
            colour += 1;
            let mut q = p;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !self.adj[v] & !(1 << v);
                p &= !(1 << v);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }

    fn colour_bound(&self, p: Bits) -> usize {
        self.colour_sort(p).1.last().copied().unwrap_or(0)
    }
}

struct Search<'a> {
    graph: &'a Graph,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(())
        } else {
            Ok(())
        }
    }

    /// Branch and bound for the clique number, colour classes as the bound.
    fn max_clique(&mut self, r: &mut Vec<usize>, mut p: Bits) -> Result<(), ()> {
        let (order, colours) = self.graph.colour_sort(p);
        for idx in (0..order.len()).rev() {
            if r.len() + colours[idx] <= self.best.len() {
                return Ok(());
            }
            self.tick()?;
            let v = order[idx];
            r.push(v);
            let next = p & self.graph.adj[v];
            if next == 0 {
                if r.len() > self.best.len() {
                    self.best = r.clone();
                }
            } else {
                self.max_clique(r, next)?;
            }
            r.pop();
            p &= !(1 << v);
        }
        Ok(())
    }

    /// Lexicographically first clique of size `target`, built in increasing
    /// vertex order.
    fn first_clique(&mut self, r: &mut Vec<usize>, p: Bits, target: usize) -> Result<bool, ()> {
        if r.len() == target {
            return Ok(true);
        }
        if r.len() + self.graph.colour_bound(p) < target {
            return Ok(false);
        }
        let mut q = p;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1 << v);
            self.tick()?;
            r.push(v);
            let above = !((1 as Bits) << v << 1).wrapping_sub(1);
            if self.first_clique(r, p & self.graph.adj[v] & above, target)? {
                return Ok(true);
            }
            r.pop();
        }
        Ok(false)
    }
}

/// Largest `k`-intersecting family on `{1..n}`, exhaustively.
pub fn enumerate_max_family(
    n: usize,
    k: usize,
    budget: u64,
) -> Result<ExtremalReport, ProverError> {
    if n > MAX_EXTREMAL_N || k == 0 || k >= n {
        return Err(ProverError::InvalidParameters(format!(
            "extremal search needs 1 <= k < n <= {MAX_EXTREMAL_N}, got n={n}, k={k}"
        )));
    }
    let graph = Graph::new(n, k);
    let all: Bits = if graph.sets.len() == 128 {
        Bits::MAX
    } else {
        (1 << graph.sets.len()) - 1
    };
    let mut search = Search {
        graph: &graph,
        best: Vec::new(),
        nodes: 0,
        budget,
    };

    let report = |search: &Search, clique: &[usize], complete: bool| {
        let mut sets: Vec<Vec<usize>> = clique.iter().map(|&v| graph.sets[v].clone()).collect();
        sets.sort();
        let max_m = sets.len();
        ExtremalReport {
            n,
            k,
            max_m,
            witness: SetFamily::new(n, sets).expect("clique vertices are distinct nonempty sets"),
            bound_respected: max_m <= n,
            nodes_explored: search.nodes,
            complete,
        }
    };

    if search.max_clique(&mut Vec::new(), all).is_err() {
        let partial = report(&search, &search.best.clone(), false);
        return Err(ProverError::BudgetExceeded(Box::new(partial)));
    }
    let target = search.best.len();
    let mut witness = Vec::new();
    match search.first_clique(&mut witness, all, target) {
        Ok(true) => Ok(report(&search, &witness, true)),
        Ok(false) => Err(ProverError::InvariantViolation(
            "no clique of the maximum size on the second pass".into(),
        )),
        Err(()) => {
            let partial = report(&search, &search.best.clone(), false);
            Err(ProverError::BudgetExceeded(Box::new(partial)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersect::check_k_intersecting;

    /// Every subset of the vertex set, for tiny n.
    fn brute_force_max(n: usize, k: usize) -> usize {
        let g = Graph::new(n, k);
        let v = g.sets.len();
        assert!(v <= 20);
        (0u32..(1 << v))
            .filter(|&chosen| {
                (0..v).all(|a| {
                    chosen >> a & 1 == 0
                        || (0..v).all(|b| b == a || chosen >> b & 1 == 0 || g.adj[a] >> b & 1 == 1)
                })
            })
            .map(|c| c.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn matches_brute_force_up_to_four_points() {
        for n in 2..=4 {
            for k in 1..n {
                let r = enumerate_max_family(n, k, u64::MAX).unwrap();
                assert_eq!(r.max_m, brute_force_max(n, k), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn three_points() {
        let r = enumerate_max_family(3, 1, u64::MAX).unwrap();
        assert_eq!(r.max_m, 3);
        assert_eq!(check_k_intersecting(&r.witness).k, Some(1));
        assert_eq!(r.witness.sets(), &[vec![1], vec![1, 2], vec![1, 3]]);
        assert!(r.complete && r.bound_respected);
    }

    #[test]
    fn four_points_k3() {
        let r = enumerate_max_family(4, 3, u64::MAX).unwrap();
        assert_eq!(r.max_m, 2);
        assert_eq!(r.witness.sets(), &[vec![1, 2, 3], vec![1, 2, 3, 4]]);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(enumerate_max_family(8, 1, 10).is_err());
        assert!(enumerate_max_family(4, 4, 10).is_err());
        assert!(enumerate_max_family(4, 0, 10).is_err());
    }

    #[test]
    fn budget_reports_partial() {
        match enumerate_max_family(6, 1, 5) {
            Err(ProverError::BudgetExceeded(partial)) => {
                assert!(!partial.complete);
                assert!(check_k_intersecting(&partial.witness).is_k_intersecting);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }
}
