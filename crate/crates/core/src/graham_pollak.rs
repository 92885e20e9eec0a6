//! Biclique partitions of the complete graph `K_n` on vertices `1..=n`.

use serde::Serialize;
use thiserror::Error;

use crate::family::{content_lines, parse_assignment};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("part {part}: {message}")]
    InvalidBiclique { part: usize, message: String },
    #[error("n must be in {min}..={max}, got {got}")]
    OutOfRange { min: usize, max: usize, got: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Complete bipartite subgraph between two disjoint nonempty vertex sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Biclique {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Biclique {
    pub fn new(mut left: Vec<usize>, mut right: Vec<usize>) -> Result<Self, String> {
        left.sort_unstable();
        left.dedup();
        right.sort_unstable();
        right.dedup();
        if left.is_empty() || right.is_empty() {
            return Err("both sides must be nonempty".into());
        }
        if let Some(v) = left.iter().find(|v| right.binary_search(v).is_ok()) {
            return Err(format!("vertex {v} is on both sides"));
        }
        Ok(Biclique { left, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BicliquePartition {
    n: usize,
    parts: Vec<Biclique>,
}

impl BicliquePartition {
    /// Checks that every vertex lies in `1..=n`. Coverage is checked by
    /// [`verify_biclique_partition`].
    pub fn new(n: usize, parts: Vec<Biclique>) -> Result<Self, PartitionError> {
        for (idx, part) in parts.iter().enumerate() {
            if let Some(&v) = part
                .left
                .iter()
                .chain(&part.right)
                .find(|&&v| v == 0 || v > n)
            {
                return Err(PartitionError::InvalidBiclique {
                    part: idx + 1,
                    message: format!("vertex {v} outside 1..={n}"),
                });
            }
        }
        Ok(BicliquePartition { n, parts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &[Biclique] {
        &self.parts
    }

    /// `n=<int>` header, then one part per line: `left vertices | right vertices`.
    pub fn parse(input: &str) -> Result<Self, PartitionError> {
        let mut lines = content_lines(input);
        let (header_line, header) = lines.next().ok_or(PartitionError::Parse {
            line: 1,
            message: "missing `n=<int>` header".into(),
        })?;
        let n = parse_assignment(header, "n").map_err(|message| PartitionError::Parse {
            line: header_line,
            message,
        })?;
        let mut parts = Vec::new();
        for (line_no, line) in lines {
            let err = |message: String| PartitionError::Parse {
                line: line_no,
                message,
            };
            let (l, r) = line
                .split_once('|')
                .ok_or_else(|| err("expected `left | right`".into()))?;
            let side = |s: &str| {
                s.split_whitespace()
                    .map(|tok| {
                        tok.parse::<usize>()
                            .map_err(|_| err(format!("`{tok}` is not a vertex")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            };
            let part = Biclique::new(side(l)?, side(r)?).map_err(|message| {
                PartitionError::InvalidBiclique {
                    part: parts.len() + 1,
                    message,
                }
            })?;
            parts.push(part);
        }
        Self::new(n, parts)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
        let mut out = format!("n={}\n", self.n);
        for p in &self.parts {
            out.push_str(&format!("{} | {}\n", join(&p.left), join(&p.right)));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairViolation {
    pub u: usize,
    pub v: usize,
    /// 0 for an uncovered edge, >= 2 for a repeated one.
    pub times_covered: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionVerdict {
    pub valid: bool,
    /// First edge `{u, v}` (`u < v`, lexicographic) not covered exactly once.
    pub violation: Option<PairViolation>,
}

pub fn verify_biclique_partition(p: &BicliquePartition) -> PartitionVerdict {
    let n = p.n;
    let mut cover = vec![0usize; (n + 1) * (n + 1)];
    for part in &p.parts {
        for &a in &part.left {
            for &b in &part.right {
                let (u, v) = if a < b { (a, b) } else { (b, a) };
                cover[u * (n + 1) + v] += 1;
            }
        }
    }
    for u in 1..=n {
        for v in (u + 1)..=n {
            let times = cover[u * (n + 1) + v];
            if times != 1 {
                return PartitionVerdict {
                    valid: false,
                    violation: Some(PairViolation {
                        u,
                        v,
                        times_covered: times,
                    }),
                };
            }
        }
    }
    PartitionVerdict {
        valid: true,
        violation: None,
    }
}

/// `({i}, {i+1..n})` for `i = 1..n-1`.
pub fn star_partition(n: usize) -> Result<BicliquePartition, PartitionError> {
    if n < 2 {
        return Err(PartitionError::OutOfRange {
            min: 2,
            max: usize::MAX,
            got: n,
        });
    }
    let parts = (1..n)
        .map(|i| Biclique::new(vec![i], ((i + 1)..=n).collect()).expect("star parts are valid"))
        .collect();
    BicliquePartition::new(n, parts)
}

pub const MAX_BRUTE_FORCE_N: usize = 4;

/// Fewest bicliques partitioning the edges of `K_n`, by exhaustive search
/// over all bicliques of `K_n` (at most 6 edges, 25 bicliques).
pub fn min_partition_bruteforce(n: usize) -> Result<usize, PartitionError> {
    if !(2..=MAX_BRUTE_FORCE_N).contains(&n) {
        return Err(PartitionError::OutOfRange {
            min: 2,
            max: MAX_BRUTE_FORCE_N,
            got: n,
        });
    }
    let mut edge_id = vec![vec![usize::MAX; n]; n];
    let mut edges = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            edge_id[u][v] = edges;
            edge_id[v][u] = edges;
            edges += 1;
        }
    }
    // Every unordered pair of disjoint nonempty vertex sets: assign each
    // vertex to left (1), right (2) or neither (0), keep one orientation.
    let mut bicliques: Vec<u32> = Vec::new();
    for code in 0..3usize.pow(n as u32) {
        let side: Vec<usize> = (0..n).map(|v| code / 3usize.pow(v as u32) % 3).collect();
        let left: Vec<usize> = (0..n).filter(|&v| side[v] == 1).collect();
        let right: Vec<usize> = (0..n).filter(|&v| side[v] == 2).collect();
        if left.is_empty() || right.is_empty() || left[0] > right[0] {
            continue;
        }
        let mask = left
            .iter()
            .flat_map(|&a| right.iter().map(move |&b| (a, b)))
            .fold(0u32, |acc, (a, b)| acc | 1 << edge_id[a][b]);
        bicliques.push(mask);
    }

    // Exact cover DP over covered-edge masks, always covering the lowest
    // uncovered edge next.
    let full = (1u32 << edges) - 1;
    let mut best = vec![usize::MAX; 1 << edges];
    best[0] = 0;
    for mask in 0..=full {
        if best[mask as usize] == usize::MAX || mask == full {
            continue;
        }
        let next_edge = (!mask).trailing_zeros();
        for &b in &bicliques {
            if b >> next_edge & 1 == 1 && b & mask == 0 {
                let to = (mask | b) as usize;
                best[to] = best[to].min(best[mask as usize] + 1);
            }
        }
    }
    Ok(best[full as usize])
}
