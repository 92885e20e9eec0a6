//! Set families over a 1-indexed ground set and their incidence matrices.
//!
//! Elements are the integers `1..=n`. Sets are stored sorted and
//! deduplicated, so two families compare equal exactly when they list the
//! same sets in the same order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::kernel::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("set {set} contains element {element}, outside 1..={n}")]
    ElementOutOfRange {
        set: usize,
        element: usize,
        n: usize,
    },
    #[error("set {set} is empty")]
    EmptySet { set: usize },
    #[error("sets {first} and {second} are equal")]
    DuplicateSet { first: usize, second: usize },
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// An ordered family of distinct nonempty subsets of `{1, ..., n}`.
///
/// Set positions in error messages and reports are 1-based, matching the
/// element convention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFamily")]
pub struct SetFamily {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl SetFamily {
    /// Validates and normalizes a family. Element lists may be unsorted and
    /// may repeat an element; both are normalized away.
    pub fn new(n: usize, sets: Vec<Vec<usize>>) -> Result<Self, FamilyError> {
        let mut normalized = Vec::with_capacity(sets.len());
        for (idx, mut set) in sets.into_iter().enumerate() {
            if set.is_empty() {
                return Err(FamilyError::EmptySet { set: idx + 1 });
            }
            set.sort_unstable();
            set.dedup();
            if let Some(&bad) = set.iter().find(|&&e| e == 0 || e > n) {
                return Err(FamilyError::ElementOutOfRange {
                    set: idx + 1,
                    element: bad,
                    n,
                });
            }
            normalized.push(set);
        }
        for i in 0..normalized.len() {
            for j in (i + 1)..normalized.len() {
                if normalized[i] == normalized[j] {
                    return Err(FamilyError::DuplicateSet {
                        first: i + 1,
                        second: j + 1,
                    });
                }
            }
        }
        Ok(SetFamily {
            n,
            sets: normalized,
        })
    }

    pub fn empty(n: usize) -> Self {
        SetFamily {
            n,
            sets: Vec::new(),
        }
    }

    /// Ground-set size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of member sets.
    pub fn m(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// `|A_i ∩ A_j|` for 0-based positions.
    pub fn intersection_size(&self, i: usize, j: usize) -> usize {
        sorted_intersection_len(&self.sets[i], &self.sets[j])
    }

    /// Membership indicator: `x[i][j-1] = 1` iff `j ∈ A_i`.
    pub fn build_incidence(&self) -> IncidenceMatrix {
        let entries = self
            .sets
            .iter()
            .map(|set| {
                let mut row = vec![0u8; self.n];
                for &e in set {
                    row[e - 1] = 1;
                }
                row
            })
            .collect();
        IncidenceMatrix {
            m: self.sets.len(),
            n: self.n,
            entries,
        }
    }

    /// Canonical text form: `n=<int>` then one set per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={}\n", self.n);
        for set in &self.sets {
            let line: Vec<String> = set.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Structured form `{"n": .., "sets": [[..], ..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    /// Parses either the line format or the structured JSON form, chosen by
    /// the first non-blank character.
    pub fn parse(input: &str) -> Result<Self, FamilyError> {
        if input.trim_start().starts_with('{') {
            Self::from_json(input)
        } else {
            Self::from_text(input)
        }
    }

    pub fn from_json(input: &str) -> Result<Self, FamilyError> {
        let raw: RawFamily = serde_json::from_str(input).map_err(|e| FamilyError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        Self::try_from(raw)
    }

    /// Blank lines and lines starting with `#` are skipped.
    pub fn from_text(input: &str) -> Result<Self, FamilyError> {
        let mut lines = content_lines(input);
        let (header_line, header) = lines.next().ok_or(FamilyError::Parse {
            line: 1,
            message: "missing `n=<int>` header".into(),
        })?;
        let n = parse_assignment(header, "n").map_err(|message| FamilyError::Parse {
            line: header_line,
            message,
        })?;
        let mut sets = Vec::new();
        for (line_no, line) in lines {
            let set = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| FamilyError::Parse {
                        line: line_no,
                        message: format!("`{tok}` is not an element index"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            sets.push(set);
        }
        Self::new(n, sets)
    }

    /// `sha256:<hex>` over the canonical text form.
    pub fn digest(&self) -> String {
        format!(
            "sha256:{}",
            hex::encode(Sha256::digest(self.to_text().as_bytes()))
        )
    }
}

#[derive(Deserialize)]
struct RawFamily {
    n: usize,
    sets: Vec<Vec<usize>>,
}

impl TryFrom<RawFamily> for SetFamily {
    type Error = FamilyError;

    fn try_from(raw: RawFamily) -> Result<Self, Self::Error> {
        SetFamily::new(raw.n, raw.sets)
    }
}

impl FromStr for SetFamily {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SetFamily::parse(s)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} [", self.n)?;
        for (i, set) in self.sets.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let parts: Vec<String> = set.iter().map(usize::to_string).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        write!(f, "]")
    }
}

/// Row-per-set 0/1 matrix of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceMatrix {
    m: usize,
    n: usize,
    entries: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Vec<u8>] {
        &self.entries
    }

    /// Entry for 0-based row `i` and 0-based column `j`.
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i][j]
    }

    /// 1-based elements where row `i` is 1.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        self.entries[i]
            .iter()
            .enumerate()
            .filter(|(_, &x)| x == 1)
            .map(|(j, _)| j + 1)
            .collect()
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|&x| i64::from(x)).collect())
            .collect();
        IntMatrix::from_rows(self.n, rows).expect("incidence rows have uniform width")
    }
}

pub(crate) fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Non-blank, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `key=<usize>`.
pub(crate) fn parse_assignment(token: &str, key: &str) -> Result<usize, String> {
    let value = token
        .trim()
        .strip_prefix(key)
        .and_then(|rest| rest.trim_start().strip_prefix('='))
        .ok_or_else(|| format!("expected `{key}=<int>`, found `{token}`"))?;
    value
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a nonnegative integer", value.trim()))
}
